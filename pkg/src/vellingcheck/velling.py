"""Proof objects for the harmonic-measure inequality and the checks that verify them.

An instance fixes an arc partition and a basic arc.  From it we build the
model domain ``D`` (disk minus geodesic lenses), the basic domain ``D°``,
the power-mapped domain ``Omega`` and the Green functions of ``Omega`` and
``D°`` on a finite-difference grid.  The comparison function ``phi`` is
assembled sector by sector from ``phi0 = omega0 * g(f(z), 0, Omega)``.

Every ``check_*`` function returns a :class:`CheckReport` whose ``margin`` is
the signed slack of the inequality or identity being tested.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .geometry import (ArcPartition, PolarArc, StarDomain, basic_domain, labeled_disk,
                       omega_domain, polygon_domain, power_map, reflect_across_ray,
                       velling_domain, wrap_angle)
from .solver.fd import LogPolarField, fd_green_logpolar, fd_harmonic_measure_logpolar
from .solver.flux import angular_derivative, normal_flux
from .solver.wos import Estimate, wos_harmonic_measure


# Green-function values below this are not resolved against the O(1) regular part
GREEN_FLOOR = 1e-8


@dataclass(frozen=True)
class SolverOptions:
    eps: float = 1e-4
    n: int = 1_000_000
    h: float = 1 / 256
    angles: int = 384
    seed: int = 0
    workers: int = 1
    dt: float = 0.02
    spacing: float = 2e-3
    offset: float = 3.0  # in units of the local grid spacing
    fd_tol: float = 5e-3
    probes: int = 20
    ray_samples: int = 12
    delta: float = 0.01
    flux_rel_tol: float = 0.02

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:12]

    def check_seed(self, name: str, instance: int = 0) -> int:
        """Per-check seed derived from the global seed, the instance id and the check name."""
        return (self.seed * 1_000_003 + instance * 7919 + zlib.crc32(name.encode())) % (1 << 63)


@dataclass
class CheckReport:
    name: str
    quantities: dict
    margin: float
    tolerance: float
    passed: bool
    runtime: float = 0.0
    fingerprint: str = ""
    seed: int = 0
    notes: str = ""

    @property
    def value(self) -> float:
        return float(self.quantities.get("value", (math.nan, 0.0))[0])

    @property
    def std_error(self) -> float:
        return float(self.quantities.get("value", (math.nan, 0.0))[1])


def omega0(p: ArcPartition) -> float:
    """Harmonic measure at 0 of the longest arc: its length over 2pi."""
    return p.alpha0 / math.pi


@dataclass(frozen=True, eq=False)
class VellingInstance:
    partition: ArcPartition
    basic: PolarArc
    D: StarDomain
    Dcirc: StarDomain
    omega0: float
    Omega: StarDomain
    green_Omega: LogPolarField
    green_Dcirc: LogPolarField
    angles: int
    # (domain name, options fingerprint, instance id) -> (Estimate, FD value)
    measures: dict = field(default_factory=dict, repr=False)


def build_instance(p: ArcPartition, basic: Optional[PolarArc] = None,
                   angles: int = 384) -> VellingInstance:
    """Domains and Green functions for one partition.

    Both Green functions have their pole at 0 and both domains can be very
    thin near it (Omega's boundary radius there is ``rho0**(1/omega0)``), so
    they are solved on log-polar grids with ``angles`` nodes per turn.
    """
    if basic is None:
        basic = PolarArc.geodesic(p.alpha0)
    basic.validate()
    w0 = omega0(p)
    D = velling_domain(p)
    Dc = basic_domain(p, basic)
    Om = omega_domain(basic, w0)
    return VellingInstance(p, basic, D, Dc, w0, Om, fd_green_logpolar(Om, angles),
                           fd_green_logpolar(Dc, angles), angles)


# --------------------------------------------------------------------------
# comparison function


def _phi0_regular(inst: VellingInstance, z):
    """``phi0(z) + log|z|``, i.e. ``omega0`` times the regular part of g_Omega at f(z).

    The Green function of Omega is conjugation symmetric, so the lookup is
    folded into the upper half plane; this makes phi0 exactly even in Im z.
    """
    w = power_map(z, inst.omega0)
    w = w.real + 1j * np.abs(w.imag)
    return inst.omega0 * inst.green_Omega.regular(w)


def _phi0(inst: VellingInstance, z):
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore"):
        return _phi0_regular(inst, z) - np.log(np.abs(z))


def phi0_at(inst: VellingInstance, z):
    """``phi0(z) = omega0 * g(f(z), 0, Omega)`` on the sector piece ``D°_0``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("phi0 is singular at the origin")
    if np.any(np.abs(np.angle(z)) > inst.partition.alpha0 + 1e-12):
        raise ValueError("phi0 is defined on the sector of the longest arc only")
    if not np.all(inst.Dcirc.contains(z) | (np.abs(z) <= inst.Dcirc.radius_at(np.angle(z)) + 1e-14)):
        raise ValueError("point outside the basic domain")
    return _phi0(inst, z)


def _branch_arg(inst: VellingInstance, z):
    """Point of ``D°_0`` whose phi0 value defines phi at ``z`` (piecewise form)."""
    p = inst.partition
    z = np.asarray(z, dtype=complex)
    k = p.sector_of(z)
    theta = np.asarray(p.centers)[k]
    d = np.asarray(p.deviations)[k]
    w = z * np.exp(-1j * theta)
    return np.where(w.imag >= 0, w * np.exp(1j * d), w * np.exp(-1j * d))


def phi_at(inst: VellingInstance, z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("phi is singular at the origin")
    if not np.all(inst.Dcirc.contains(z)):
        raise ValueError("point outside the basic domain")
    return _phi0(inst, _branch_arg(inst, z))


def phi_max_form(inst: VellingInstance, z):
    """``max(phi0(eta w), phi0(conj(eta) w))`` where both arguments lie in ``D°_0``; NaN elsewhere."""
    p = inst.partition
    z = np.asarray(z, dtype=complex)
    k = p.sector_of(z)
    w = z * np.exp(-1j * np.asarray(p.centers)[k])
    d = np.asarray(p.deviations)[k]
    a = _phi0(inst, w * np.exp(1j * d))
    b = _phi0(inst, w * np.exp(-1j * d))
    return np.fmax(a, b) + np.where(np.isnan(a) | np.isnan(b), np.nan, 0.0)


def u_at(inst: VellingInstance, z, fd_tol: float = 5e-3):
    """``u = phi - g(., 0, D°)`` with the FD tolerance as its uncertainty.

    Both terms carry the same ``-log|z|`` singularity, which cancels
    analytically; only the regular parts are differenced.
    """
    z = np.asarray(z, dtype=complex)
    if not np.all(inst.Dcirc.contains(z)):
        raise ValueError("point outside the basic domain")
    val = _phi0_regular(inst, _branch_arg(inst, z)) - inst.green_Dcirc.regular(z)
    return val, fd_tol


# --------------------------------------------------------------------------
# probe sets


def _admissible_run(d: StarDomain, t: float, margin: float, r_min: float, m: int = 801):
    """First radial interval along angle ``t`` with radius >= r_min and boundary distance >= margin."""
    rb = float(d.radius_at(np.array([t]))[0])
    if rb <= r_min:
        return None
    ray = np.linspace(r_min, rb, m)[:-1]
    dist, _, _ = d.query(ray * np.exp(1j * t))
    good = dist >= margin
    if not good.any():
        return None
    first = int(np.argmax(good))
    rest = np.nonzero(~good[first:])[0]
    last = first + (rest[0] if len(rest) else len(ray) - first) - 1
    if last <= first:
        return None
    return float(ray[first]), float(ray[last])


def polar_probes(d: StarDomain, angles: np.ndarray, count: int, margin: float = 0.05,
                 r_min: float = 0.05) -> np.ndarray:
    """``count`` radii per angle from ``r_min`` out to the last radius keeping ``margin`` to the boundary.

    Angles along which no such stretch exists are skipped.
    """
    out = []
    for t in angles:
        run = _admissible_run(d, t, margin, r_min)
        if run is None:
            continue
        lo, hi = run
        radii = lo + (hi - lo) * (np.arange(count) + 0.5) / count
        out.append(radii * np.exp(1j * t))
    return np.concatenate(out) if out else np.zeros(0, dtype=complex)


# --------------------------------------------------------------------------
# checks


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.runtime = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _both(d: StarDomain, target, opts: SolverOptions, seed: int) -> tuple[Estimate, float]:
    est = wos_harmonic_measure(d, 0j, target, opts.eps, opts.n, seed, opts.workers)
    fd = float(fd_harmonic_measure_logpolar(d, target, opts.angles)(0j))
    return est, fd


def _measure(inst: VellingInstance, which: str, opts: SolverOptions, instance_id: int):
    """omega(0, label 0, domain) for ``which`` in ("D", "Dcirc"), shared between checks.

    The seed depends on the domain, not on the check, so every check that
    needs the same harmonic measure sees the same estimate.
    """
    key = (which, opts.fingerprint(), instance_id)
    if key not in inst.measures:
        seed = opts.check_seed(which, instance_id)
        inst.measures[key] = _both(getattr(inst, which), 0, opts, seed) + (seed,)
    return inst.measures[key]


@_timed
def check_theorem(inst: VellingInstance, opts: SolverOptions = SolverOptions(),
                  instance_id: int = 0) -> CheckReport:
    """omega(0, I0°, D°) >= omega0, by both backends."""
    est, fd, seed = _measure(inst, "Dcirc", opts, instance_id)
    sigma = est.std_error
    margin = est.value - inst.omega0
    tol = 3 * sigma + opts.fd_tol
    agree = abs(est.value - fd) <= 3 * sigma + opts.fd_tol
    passed = margin >= -tol and fd - inst.omega0 >= -opts.fd_tol and agree
    q = {"value": (est.value, sigma), "fd": (fd, opts.fd_tol), "omega0": (inst.omega0, 0.0),
         "fd_margin": (fd - inst.omega0, opts.fd_tol), "strict": (float(margin > 3 * sigma), 0.0),
         "backend_gap": (est.value - fd, 3 * sigma + opts.fd_tol)}
    return CheckReport("theorem", q, margin, tol, bool(passed), fingerprint=opts.fingerprint(), seed=seed)


@_timed
def check_conjecture(inst: VellingInstance, opts: SolverOptions = SolverOptions(),
                     instance_id: int = 0) -> CheckReport:
    """omega(0, I0, D) >= omega(0, I0, D°) >= omega0 and the implied image length."""
    if inst.basic.kind != "geodesic":
        raise ValueError("the conjecture chain needs the geodesic basic arc")
    eD, fD, seed = _measure(inst, "D", opts, instance_id)
    eC, fC, _ = _measure(inst, "Dcirc", opts, instance_id)
    sig = math.hypot(eD.std_error, eC.std_error)
    tol = 3 * sig + opts.fd_tol
    m_cmp = eD.value - eC.value
    m_vel = eD.value - inst.omega0
    margin = min(m_cmp, m_vel)
    agree = (abs(eD.value - fD) <= 3 * eD.std_error + opts.fd_tol
             and abs(eC.value - fC) <= 3 * eC.std_error + opts.fd_tol)
    passed = (m_cmp >= -tol and eD.value - inst.omega0 >= -(3 * eD.std_error + opts.fd_tol)
              and fD - fC >= -opts.fd_tol and fD - inst.omega0 >= -opts.fd_tol and agree)
    q = {"value": (eD.value, eD.std_error), "fd": (fD, opts.fd_tol),
         "basic": (eC.value, eC.std_error), "basic_fd": (fC, opts.fd_tol),
         "omega0": (inst.omega0, 0.0), "compare_margin": (m_cmp, tol), "velling_margin": (m_vel, tol),
         "image_length": (2 * math.pi * fD, 2 * math.pi * opts.fd_tol),
         "arc_length": (2 * inst.partition.alpha0, 0.0)}
    return CheckReport("conjecture", q, margin, tol, bool(passed), fingerprint=opts.fingerprint(), seed=seed)


def inradius(d: StarDomain, upper: bool = False, n_angles: int = 300, n_radii: int = 60) -> float:
    """Largest boundary distance found on a polar sample of ``d`` (or of its upper half)."""
    span = math.pi if upper else 2 * math.pi
    t = span * (np.arange(n_angles) + 0.5) / n_angles
    frac = np.linspace(0.02, 0.98, n_radii)
    z = (d.radius_at(t)[:, None] * frac[None, :]) * np.exp(1j * t)[:, None]
    dist, _ = d.distance_to_boundary(z.ravel())
    return float(dist.max())


def probe_margin(d: StarDomain, margin: float = 0.05, upper: bool = False) -> float:
    """``margin`` capped at half the inradius: near-extremal partitions give very thin domains."""
    return min(margin, 0.5 * inradius(d, upper))


def lemma_probes(inst: VellingInstance, count: int = 20, margin: float = 0.05) -> np.ndarray:
    """``count`` x ``count`` polar grid over the part of the upper half of Omega at distance >= margin."""
    scan = math.pi * (np.arange(400) + 0.5) / 400
    ok = [t for t in scan if _admissible_run(inst.Omega, t, margin, 1e-3) is not None]
    if not ok:
        return np.zeros(0, dtype=complex)
    lo, hi = min(ok), max(ok)
    angles = lo + (hi - lo) * (np.arange(count) + 0.5) / count
    return polar_probes(inst.Omega, angles, count, margin, 1e-3)


@_timed
def check_lemma(inst: VellingInstance, opts: SolverOptions = SolverOptions(),
                instance_id: int = 0, sym_tol: float = 1e-2, margin: float = 0.05) -> CheckReport:
    """dg(rho e^{it}, 0, Omega)/dt > 0 in the upper half and g(z) = g(conj z)."""
    g = inst.green_Omega
    m = probe_margin(inst.Omega, margin, upper=True)
    z = lemma_probes(inst, opts.probes, m)
    # keep probes resolved by the grid; rotate by at most half the boundary distance.
    # Deep in the thin spike towards -1 the Green function falls below double
    # precision relative to its regular part, so the sign is undecidable there.
    dist, _ = inst.Omega.distance_to_boundary(z)
    gridded = dist >= 4 * g.local_spacing(z)
    resolved = g(z) >= GREEN_FLOOR
    keep = gridded & resolved
    z, dist = z[keep], dist[keep]
    dt = np.minimum(opts.dt, 0.5 * dist / np.abs(z))
    # -log|z| does not depend on the angle, so differentiate the regular part only
    deriv = angular_derivative(g.regular, z, dt, inst.Omega, g.local_spacing(z))
    sym = np.abs(g(z) - g(np.conj(z)))
    mirrored = angular_derivative(g.regular, np.conj(z), dt)
    anti = np.abs(mirrored + deriv)
    mind = float(deriv.min()) if len(z) else math.nan
    passed = len(z) > 0 and mind > 0 and float(sym.max()) <= sym_tol
    q = {"value": (mind, 0.0), "min_derivative": (mind, 0.0), "max_asymmetry": (float(sym.max(initial=0)), sym_tol),
         "max_antisymmetry": (float(anti.max(initial=0)), 2 * sym_tol), "probes": (float(len(z)), 0.0),
         "probe_margin": (m, 0.0), "unresolved_grid": (float(np.sum(~gridded)), 0.0),
         "unresolved_value": (float(np.sum(gridded & ~resolved)), GREEN_FLOOR)}
    return CheckReport("lemma", q, mind, 0.0, bool(passed), fingerprint=opts.fingerprint())


def _flux_offset(inst: VellingInstance, opts: SolverOptions):
    # the log-polar spacing at f(z) is delta*|f(z)|; pulled back by |f'(z)| it is omega0*delta*|z|
    delta = inst.green_Omega.delta

    def off(pts):
        return opts.offset * inst.omega0 * delta * np.abs(pts)
    return off


@_timed
def check_flux(inst: VellingInstance, opts: SolverOptions = SolverOptions(),
               instance_id: int = 0) -> CheckReport:
    """(1/2pi) * flux of phi0 through I0° equals omega0; flux form of omega(0, I0°, D°)."""
    pieces = inst.Dcirc.pieces_with_label(0)
    phi0 = lambda z: _phi0(inst, z)  # noqa: E731
    off = _flux_offset(inst, opts)
    flux_phi = sum(normal_flux(phi0, p, opts.spacing, off, h=0.0, boundary_value=0.0) for p in pieces)
    rel = abs(flux_phi - inst.omega0) / inst.omega0
    gD = inst.green_Dcirc
    flux_g = sum(normal_flux(gD, p, opts.spacing, lambda pts: opts.offset * gD.local_spacing(pts), h=0.0)
                 for p in pieces)
    direct = float(fd_harmonic_measure_logpolar(inst.Dcirc, 0, opts.angles)(0j))
    rel_g = abs(flux_g - direct) / direct
    gO = inst.green_Omega
    total_omega = normal_flux(gO, inst.Omega.pieces[0], opts.spacing / 20,
                              lambda pts: opts.offset * gO.local_spacing(pts), h=0.0)
    rel_t = abs(total_omega - 1.0)
    margin = opts.flux_rel_tol - max(rel, rel_g, rel_t)
    q = {"value": (flux_phi, opts.flux_rel_tol * inst.omega0), "omega0": (inst.omega0, 0.0),
         "relative_error": (rel, opts.flux_rel_tol), "green_flux": (flux_g, 0.0),
         "direct_measure": (direct, opts.fd_tol), "green_relative_error": (rel_g, opts.flux_rel_tol),
         "omega_total_flux": (total_omega, opts.flux_rel_tol)}
    return CheckReport("flux", q, margin, 0.0, bool(margin >= 0), fingerprint=opts.fingerprint())


def _circle_mean(f, z, delta: float, m: int = 64):
    ang = np.exp(2j * math.pi * np.arange(m) / m)
    pts = np.asarray(z)[:, None] + delta * ang[None, :]
    return np.mean(f(pts), axis=1)


def ray_points(inst: VellingInstance, samples: int, margin: float = 0.05,
               r_min: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    """Points on the interior sector-boundary rays and the ray angle for each."""
    pts, angs = [], []
    for g in inst.partition.ray_angles:
        z = polar_probes(inst.Dcirc, [g], samples, margin, r_min)
        pts.append(z)
        angs.append(np.full(len(z), g))
    return np.concatenate(pts), np.concatenate(angs)


@_timed
def check_phi_regularity(inst: VellingInstance, opts: SolverOptions = SolverOptions(),
                         instance_id: int = 0, factor: float = 4.0) -> CheckReport:
    """Mirror identity across rays, harmonicity across rays, subharmonicity at branch seams."""
    p = inst.partition
    m = probe_margin(inst.Dcirc)
    delta = min(opts.delta, m / 5)
    f = lambda z: _phi0(inst, _branch_arg(inst, z))  # noqa: E731
    # thin basic domains only have room along the rays close to the origin
    r_min = min(0.1, 2 * m)
    rz, rang = ray_points(inst, opts.ray_samples, margin=m, r_min=r_min)
    if len(rz) == 0:
        return CheckReport("regularity", {"value": (math.nan, factor), "ray_points": (0.0, 0.0)},
                           math.nan, 0.0, False, fingerprint=opts.fingerprint(),
                           notes="no ray points at the probe margin")
    # (i) mirrored values across each ray, offset off the ray into the lower sector
    off = rz * np.exp(-1j * 0.03)
    mirror = reflect_across_ray(off, rang)
    ok = inst.Dcirc.contains(off) & inst.Dcirc.contains(mirror)
    mirror_err = float(np.max(np.abs(f(off[ok]) - f(mirror[ok])), initial=0.0))
    # (ii) mean-value deviation on the rays vs control points beside them: same
    # radius, 3*delta of arc into either sector, so they share the grid noise
    dev_ray = np.abs(f(rz) - _circle_mean(f, rz, delta))
    step = 3 * delta / np.abs(rz)
    ctrl = np.concatenate([rz * np.exp(1j * step), rz * np.exp(-1j * step)])
    ctrl = ctrl[inst.Dcirc.contains(ctrl)]
    dist, _ = inst.Dcirc.distance_to_boundary(ctrl)
    # the averaging circle must stay clear of every ray and branch seam
    kinks = np.concatenate([p.ray_angles, p.centers])
    gap = np.min(np.abs(wrap_angle(np.angle(ctrl)[:, None] - kinks[None, :])), axis=1)
    clear = np.abs(ctrl) * np.sin(np.minimum(gap, math.pi / 2)) > 1.5 * delta
    ctrl = ctrl[(dist > 1.25 * delta) & clear]
    dev_ctrl = np.abs(f(ctrl) - _circle_mean(f, ctrl, delta))
    if len(ctrl) == 0:
        return CheckReport("regularity", {"value": (math.nan, factor), "ray_points": (float(len(rz)), 0.0)},
                           math.nan, 0.0, False, fingerprint=opts.fingerprint(),
                           notes="no control points clear of rays and seams")
    c_fit = float(dev_ctrl.max()) / delta ** 2
    ratio = float(dev_ray.max()) / (c_fit * delta ** 2)
    # (iii) seams where the two branches meet: phi <= circle mean
    seams = []
    for k, a in enumerate(p.arcs):
        if p.deviations[k] > 1e-9:
            seams.append(polar_probes(inst.Dcirc, [a.center], opts.ray_samples, m, r_min))
    seams = np.concatenate(seams) if seams else np.zeros(0, dtype=complex)
    sub = f(seams) - _circle_mean(f, seams, delta) if len(seams) else np.zeros(0)
    sub_excess = float(sub.max(initial=-np.inf)) if len(sub) else -math.inf
    sub_ok = sub_excess <= c_fit * delta ** 2 * factor
    passed = len(rz) > 0 and mirror_err <= 1e-12 and ratio <= factor and sub_ok
    q = {"value": (ratio, factor), "mirror_error": (mirror_err, 1e-12),
         "ray_deviation": (float(dev_ray.max()), c_fit * delta ** 2 * factor),
         "control_deviation": (float(dev_ctrl.max()), 0.0), "C": (c_fit, 0.0),
         "seam_excess": (sub_excess if len(sub) else 0.0, c_fit * delta ** 2 * factor),
         "ray_points": (float(len(rz)), 0.0), "delta": (delta, 0.0)}
    return CheckReport("regularity", q, factor - ratio, 0.0, bool(passed), fingerprint=opts.fingerprint())


@_timed
def check_u(inst: VellingInstance, opts: SolverOptions = SolverOptions(),
            instance_id: int = 0, bound: float = 1e-2) -> CheckReport:
    """u = phi - g(., 0, D°) <= 0 on a probe grid; u == 0 for equal arcs; bounded near 0."""
    p = inst.partition
    angles = 2 * math.pi * (np.arange(4 * opts.probes) + 0.5) / (4 * opts.probes)
    z = polar_probes(inst.Dcirc, angles, opts.probes, probe_margin(inst.Dcirc), 1e-3)
    u, _ = u_at(inst, z, opts.fd_tol)
    umax = float(np.max(u, initial=-np.inf))
    uabs = float(np.max(np.abs(u), initial=0.0))
    r = np.geomspace(1e-3, 1e-1, 25)
    near = r * np.exp(0.3j * p.alpha0)
    near = near[inst.Dcirc.contains(near)]
    reg = _phi0_regular(inst, near)
    near_spread = float(np.max(reg) - np.min(reg))
    u_near, _ = u_at(inst, near, opts.fd_tol)
    passed = len(z) > 0 and umax <= bound and np.all(np.isfinite(reg))
    if p.is_equal:
        passed = passed and uabs <= bound
    q = {"value": (umax, opts.fd_tol), "max_abs_u": (uabs, bound), "probes": (float(len(z)), 0.0),
         "near_origin_regular_spread": (near_spread, 0.0),
         "near_origin_max_abs_u": (float(np.max(np.abs(u_near))), bound)}
    return CheckReport("comparison", q, bound - umax, 0.0, bool(passed), fingerprint=opts.fingerprint())


@_timed
def check_corollary(p: ArcPartition, opts: SolverOptions = SolverOptions(),
                    instance_id: int = 0) -> CheckReport:
    """omega(0, longest side, inscribed polygon) >= omega0."""
    seed = opts.check_seed("corollary", instance_id)
    P = polygon_domain(p)
    est, fd = _both(P, 0, opts, seed)
    w0 = omega0(p)
    sigma = est.std_error
    margin = est.value - w0
    tol = 3 * sigma + opts.fd_tol
    agree = abs(est.value - fd) <= tol
    passed = margin >= -tol and fd - w0 >= -opts.fd_tol and agree and est.value <= 1 + tol
    q = {"value": (est.value, sigma), "fd": (fd, opts.fd_tol), "omega0": (w0, 0.0),
         "fd_margin": (fd - w0, opts.fd_tol), "backend_gap": (est.value - fd, tol)}
    return CheckReport("corollary", q, margin, tol, bool(passed), fingerprint=opts.fingerprint(), seed=seed)


@_timed
def check_domain_extension(p: ArcPartition, drop: int, opts: SolverOptions = SolverOptions(),
                           instance_id: int = 0) -> CheckReport:
    """Removing lens ``drop`` (not 0) from D does not decrease omega(0, I0, .)."""
    from .geometry import CirclePiece, StarDomain as _SD
    if drop == 0:
        raise ValueError("the longest arc's lens cannot be removed")
    D = velling_domain(p)
    pieces = list(D.pieces)
    a = p.arcs[drop]
    pieces[drop] = CirclePiece(0j, 1.0, a.center - a.half_opening, a.length, drop, "circle")
    D1 = _SD(tuple(pieces), "velling-minus-lens")
    seed = opts.check_seed("extension", instance_id)
    e0, f0 = _both(D, 0, opts, seed)
    e1, f1 = _both(D1, 0, opts, seed)
    sig = math.hypot(e0.std_error, e1.std_error)
    margin = e1.value - e0.value
    passed = margin >= -3 * sig and f1 - f0 >= -1e-9
    q = {"value": (e1.value, e1.std_error), "base": (e0.value, e0.std_error),
         "fd_gain": (f1 - f0, 0.0)}
    return CheckReport("extension", q, margin, 3 * sig, bool(passed), fingerprint=opts.fingerprint(), seed=seed)


def disk_omega0_crosscheck(p: ArcPartition, opts: SolverOptions = SolverOptions()) -> Estimate:
    """Monte Carlo omega(0, L0, disk) for comparison with :func:`omega0`."""
    return wos_harmonic_measure(labeled_disk(p), 0j, 0, opts.eps, opts.n, opts.seed, opts.workers)

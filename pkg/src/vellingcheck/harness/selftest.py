"""Closed-form oracles for both backends: disk, disk Green function, single lens."""

from __future__ import annotations

import math
import time

from ..geometry import arc_disk, lens_domain, unit_disk
from ..solver.fd import fd_green, fd_harmonic_measure, fd_harmonic_measure_logpolar
from ..solver.wos import wos_green, wos_harmonic_measure
from ..velling import CheckReport, SolverOptions

LENS_ANGLES = {"pi/6": math.pi / 6, "pi/4": math.pi / 4, "pi/3": math.pi / 3}


def _report(name, opts, seed, exact, wos=None, fd=None, extra=None, t0=0.0) -> CheckReport:
    """Margin is the smallest slack among the backend tolerances (3 sigma for WoS, fd_tol for FD)."""
    slack = []
    q = {"exact": (exact, 0.0)}
    if wos is not None:
        q["value"] = (wos.value, wos.std_error)
        slack.append(3 * wos.std_error - abs(wos.value - exact))
    if fd is not None:
        q["fd"] = (fd, opts.fd_tol)
        if wos is None:
            q["value"] = (fd, opts.fd_tol)
        slack.append(opts.fd_tol - abs(fd - exact))
    q.update(extra or {})
    margin = min(slack)
    rep = CheckReport(name, q, margin, 0.0, bool(margin >= 0), fingerprint=opts.fingerprint(), seed=seed)
    rep.runtime = time.perf_counter() - t0
    return rep


def _combined(name, opts, seed, exact, wos, fd, t0) -> CheckReport:
    tol = 3 * wos.std_error + opts.fd_tol
    margin = min(tol - abs(wos.value - exact), tol - abs(fd - exact))
    q = {"value": (wos.value, wos.std_error), "fd": (fd, opts.fd_tol), "exact": (exact, 0.0)}
    rep = CheckReport(name, q, margin, tol, bool(margin >= 0), fingerprint=opts.fingerprint(), seed=seed)
    rep.runtime = time.perf_counter() - t0
    return rep


def solver_selftest(opts: SolverOptions = SolverOptions()) -> list[tuple[str, float, CheckReport]]:
    """``(oracle name, parameter, report)`` for every oracle row."""
    out = []
    # quarter-circle arc seen from the centre of the disk
    d = arc_disk(math.pi / 4)
    t0 = time.perf_counter()
    seed = opts.check_seed("disk_wos")
    est = wos_harmonic_measure(d, 0j, 0, opts.eps, opts.n, seed, opts.workers)
    out.append(("disk", math.pi / 4, _report("disk_wos", opts, seed, 0.25, wos=est, t0=t0)))
    t0 = time.perf_counter()
    fd = float(fd_harmonic_measure(d, 0, opts.h)(0j))
    out.append(("disk", math.pi / 4, _report("disk_fd", opts, 0, 0.25, fd=fd, t0=t0)))

    # g(1/2, 0, disk) = log 2, evaluated through the symmetric g(0, 1/2, disk): with the
    # pole at 0 every exit point has log|Z| = 0 and both backends would be exact
    u = unit_disk()
    t0 = time.perf_counter()
    seed = opts.check_seed("green_wos")
    est = wos_green(u, 0.5, 0j, opts.eps, opts.n, seed, opts.workers)
    out.append(("green", 0.5, _report("green_wos", opts, seed, math.log(2), wos=est, t0=t0)))
    t0 = time.perf_counter()
    fd = float(fd_green(u, 0.5, opts.h)(0j))
    out.append(("green", 0.5, _report("green_fd", opts, 0, math.log(2), fd=fd, t0=t0)))

    # single lens: omega(0, geodesic, disk minus lens) = 2 alpha / pi
    for tag, a in LENS_ANGLES.items():
        d = lens_domain(a)
        t0 = time.perf_counter()
        seed = opts.check_seed("lens_" + tag)
        est = wos_harmonic_measure(d, 0j, 0, opts.eps, opts.n, seed, opts.workers)
        fd = float(fd_harmonic_measure(d, 0, opts.h)(0j))
        out.append(("lens", a, _combined("lens_" + tag, opts, seed, 2 * a / math.pi, est, fd, t0)))

    # the two grids against each other and against the lens value
    d = lens_domain(math.pi / 4)
    t0 = time.perf_counter()
    lp = float(fd_harmonic_measure_logpolar(d, 0, opts.angles)(0j))
    cart = float(fd_harmonic_measure(d, 0, opts.h)(0j))
    rep = _report("grids", opts, 0, 0.5, fd=lp, extra={"cartesian": (cart, opts.fd_tol)}, t0=t0)
    rep.margin = min(rep.margin, opts.fd_tol - abs(lp - cart))
    rep.passed = rep.margin >= 0
    out.append(("lens", math.pi / 4, rep))
    return out

"""Finite-difference Dirichlet solver on star domains (Shortley-Weller stencils).

The grid is the lattice ``h * Z^2`` restricted to the domain.  Grid lines
that leave the domain are cut at the exact boundary crossing and the
five-point stencil uses the shortened arm there, which keeps the scheme
second order near curved boundaries.  The sparse system is factorised once
per ``(domain, h)`` so several boundary-data sets share one factorisation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..geometry import StarDomain

BoundaryData = Callable[[np.ndarray, np.ndarray], np.ndarray]

# normwise backward error |Au - b| / (|A| |u| + |b|); Shortley-Weller rows next to
# the boundary have coefficients up to 1/MIN_ARM, so an absolute residual is meaningless
RESIDUAL_TOL = 1e-12
MIN_ARM = 1e-9


class FDConvergenceError(RuntimeError):
    def __init__(self, residual: float):
        super().__init__(f"finite-difference solve did not converge: residual {residual:.3e}")
        self.residual = residual


def _crossing(d: StarDomain, p: np.ndarray, q: np.ndarray, iters: int = 60) -> np.ndarray:
    """Fraction along ``p -> q`` where the segment leaves the domain (bisection)."""
    lo = np.zeros(len(p))
    hi = np.ones(len(p))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        z = p + mid * (q - p)
        inside = np.abs(z) < d.radius_at(np.angle(z))
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


def _refined_solve(matrix, lu, rhs: np.ndarray, steps: int = 3) -> tuple[np.ndarray, float]:
    """LU solve with up to ``steps`` rounds of iterative refinement."""
    norm_a = float(abs(matrix).sum(axis=1).max())
    norm_b = float(np.max(np.abs(rhs), initial=0.0))

    def backward(u):
        r = float(np.max(np.abs(matrix @ u - rhs), initial=0.0))
        scale = norm_a * float(np.max(np.abs(u), initial=0.0)) + norm_b
        return r / scale if scale > 0 else r

    u = lu.solve(rhs)
    res = backward(u)
    for _ in range(steps):
        if res < RESIDUAL_TOL:
            break
        u = u + lu.solve(rhs - matrix @ u)
        res = backward(u)
    if res >= RESIDUAL_TOL:
        raise FDConvergenceError(res)
    return u, res


@dataclass(eq=False)
class FDSystem:
    """Assembled and factorised discrete Laplacian for one domain and spacing."""

    domain: StarDomain
    h: float
    xs: np.ndarray = field(init=False)
    inside: np.ndarray = field(init=False)
    index: np.ndarray = field(init=False)

    def __post_init__(self):
        h = self.h
        m = int(math.ceil(1.0 / h)) + 1
        self.xs = np.arange(-m, m + 1) * h
        X, Y = np.meshgrid(self.xs, self.xs, indexing="ij")
        Z = X + 1j * Y
        self.inside = self.domain.contains(Z)
        n = int(self.inside.sum())
        self.index = np.full(self.inside.shape, -1, dtype=np.int64)
        self.index[self.inside] = np.arange(n)
        ii, jj = np.nonzero(self.inside)
        zp = Z[ii, jj]

        arms = {}
        bnd_rows, bnd_coef, bnd_pts = [], [], []
        nbr = {}
        for key, (di, dj) in {"E": (1, 0), "W": (-1, 0), "N": (0, 1), "S": (0, -1)}.items():
            ni, nj = ii + di, jj + dj
            ok = self.inside[ni, nj]
            frac = np.ones(n)
            out = ~ok
            if out.any():
                p = zp[out]
                q = Z[ni[out], nj[out]]
                frac[out] = np.maximum(_crossing(self.domain, p, q), MIN_ARM)
            arms[key] = frac * h
            nbr[key] = (ok, ni, nj, frac)

        rows, cols, vals = [], [], []
        diag = np.zeros(n)
        for a, b in (("E", "W"), ("N", "S")):
            ha, hb = arms[a], arms[b]
            for key, own, other in ((a, ha, hb), (b, hb, ha)):
                coef = 2.0 / (own * (own + other)) * h * h
                diag -= coef
                ok, ni, nj, frac = nbr[key]
                r = np.nonzero(ok)[0]
                rows.append(r)
                cols.append(self.index[ni[ok], nj[ok]])
                vals.append(coef[ok])
                rb = np.nonzero(~ok)[0]
                step = np.array({"E": 1, "W": -1, "N": 1j, "S": -1j}[key]) * h
                bnd_rows.append(rb)
                bnd_coef.append(coef[~ok])
                bnd_pts.append(zp[~ok] + frac[~ok] * step)
        rows.append(np.arange(n))
        cols.append(np.arange(n))
        vals.append(diag)
        self.matrix = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                                    shape=(n, n))
        self.bnd_rows = np.concatenate(bnd_rows)
        self.bnd_coef = np.concatenate(bnd_coef)
        self.bnd_pts = np.concatenate(bnd_pts)
        self.bnd_labels = self.domain.label_at(np.angle(self.bnd_pts))
        self._lu = spla.splu(self.matrix)

    @property
    def unknowns(self) -> int:
        return self.matrix.shape[0]

    def solve(self, data: BoundaryData, pole: Optional[complex] = None) -> "ScalarField":
        g = np.asarray(data(self.bnd_labels, self.bnd_pts), dtype=float)
        rhs = np.zeros(self.unknowns)
        np.add.at(rhs, self.bnd_rows, -self.bnd_coef * g)
        u, res = _refined_solve(self.matrix, self._lu, rhs)
        values = np.full(self.inside.shape, np.nan)
        values[self.inside] = u
        return ScalarField(self.xs, self.h, values, self.inside, self.domain, data, pole, res)


@functools.lru_cache(maxsize=8)
def fd_system(d: StarDomain, h: float) -> FDSystem:
    return FDSystem(d, h)


@dataclass(eq=False)
class ScalarField:
    """Grid function over a star domain; ``pole`` adds ``-log|z - pole|`` analytically."""

    xs: np.ndarray
    h: float
    values: np.ndarray
    inside: np.ndarray
    domain: StarDomain
    data: BoundaryData
    pole: Optional[complex] = None
    residual: float = 0.0

    def local_spacing(self, z):
        return np.full(np.shape(z), self.h)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        v = self.regular(z)
        if self.pole is not None:
            with np.errstate(divide="ignore"):
                v = v - np.log(np.abs(z - self.pole))
        return v

    def on_boundary(self, pts):
        """Field value at boundary points (zero for Green functions)."""
        pts = np.asarray(pts, dtype=complex)
        if self.pole is not None:
            return np.zeros(pts.shape)
        return np.asarray(self.data(self.domain.label_at(np.angle(pts)), pts), dtype=float)

    def _bilinear(self, z):
        x0 = self.xs[0]
        fx = (z.real - x0) / self.h
        fy = (z.imag - x0) / self.h
        i = np.clip(np.floor(fx).astype(np.int64), 0, len(self.xs) - 2)
        j = np.clip(np.floor(fy).astype(np.int64), 0, len(self.xs) - 2)
        tx = fx - i
        ty = fy - j
        v00 = self.values[i, j]
        v10 = self.values[i + 1, j]
        v01 = self.values[i, j + 1]
        v11 = self.values[i + 1, j + 1]
        return ((1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10
                + (1 - tx) * ty * v01 + tx * ty * v11)

    def regular(self, z):
        """Grid part of the field; NaN outside the domain.

        Bilinear interpolation where the enclosing cell is interior, otherwise
        a quadratic in the radius through the boundary value and two
        interpolable points further in along the same ray.
        """
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        z = z.ravel()
        out = self._bilinear(z)
        inside = self.domain.contains(z)
        out[~inside] = np.nan
        need = np.nonzero(inside & np.isnan(out))[0]
        if len(need):
            out[need] = self._radial(z[need])
        return out.reshape(shape)

    def _radial(self, z):
        t = np.angle(z)
        r = np.abs(z)
        rb = self.domain.radius_at(t)
        zb = rb * np.exp(1j * t)
        vb = self.data(self.domain.label_at(t), zb)
        r1 = np.full(len(z), np.nan)
        v1 = np.full(len(z), np.nan)
        todo = np.ones(len(z), dtype=bool)
        for k in range(1, 200):
            rk = r - 0.5 * k * self.h
            cand = self._bilinear(np.maximum(rk, 0.0) * np.exp(1j * t))
            hit = todo & np.isfinite(cand) & (rk > 0)
            r1[hit] = rk[hit]
            v1[hit] = cand[hit]
            todo &= ~hit
            if not todo.any():
                break
        r2 = r1 - self.h
        v2 = self._bilinear(np.maximum(r2, 0.0) * np.exp(1j * t))
        # quadratic through (r2, v2), (r1, v1), (rb, vb), evaluated at r
        quad = ((r - r1) * (r - rb) / ((r2 - r1) * (r2 - rb)) * v2
                + (r - r2) * (r - rb) / ((r1 - r2) * (r1 - rb)) * v1
                + (r - r2) * (r - r1) / ((rb - r2) * (rb - r1)) * vb)
        lin = v1 + (vb - v1) * (r - r1) / (rb - r1)
        return np.where(np.isfinite(v2) & (r2 > 0), quad, lin)

    def to_csv(self, path) -> None:
        X, Y = np.meshgrid(self.xs, self.xs, indexing="ij")
        z = (X + 1j * Y)[self.inside]
        np.savetxt(path, np.column_stack([z.real, z.imag, self(z)]), delimiter=",",
                   header="x,y,value", comments="", fmt="%.12g")


def fd_solve(d: StarDomain, boundary_data: BoundaryData, h: float = 1 / 256) -> ScalarField:
    return fd_system(d, h).solve(boundary_data)


def fd_harmonic_measure(d: StarDomain, target, h: float = 1 / 256) -> ScalarField:
    target = np.atleast_1d(np.asarray(target, dtype=np.int64))
    return fd_solve(d, lambda labels, _pts: np.isin(labels, target).astype(float), h)


def fd_green(d: StarDomain, pole: complex = 0j, h: float = 1 / 256) -> ScalarField:
    pole = complex(pole)
    if not bool(d.contains(pole)):
        raise ValueError("pole outside the domain")
    return fd_system(d, h).solve(lambda _labels, pts: np.log(np.abs(pts - pole)), pole=pole)


# --------------------------------------------------------------------------
# log-polar grid, for Green functions with the pole at the origin


def _angular_crossing(d: StarDomain, sigma: np.ndarray, t0: np.ndarray, t1: np.ndarray,
                      iters: int = 60) -> np.ndarray:
    """Angle between ``t0`` (inside) and ``t1`` (outside) where ``log rho(t) = sigma``."""
    lo, hi = t0.copy(), t1.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = sigma < np.log(d.radius_at(mid))
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


@dataclass(eq=False)
class LogPolarSystem:
    """Five-point Laplacian in ``(log r, theta)`` over a star domain around 0.

    The map ``z = exp(s + i t)`` is conformal, so harmonic functions stay
    harmonic in ``(s, t)`` and the grid resolves small features near the
    origin as finely as large ones far out.  The angular direction is
    periodic; the grid is truncated ``pad`` units below the smallest
    boundary log-radius with a zero-flux condition, which is exact up to
    ``O(exp(-2 pad))`` for functions regular at 0.
    """

    domain: StarDomain
    n_angles: int = 384
    pad: float = 6.0

    def __post_init__(self):
        m = self.n_angles
        if m % 2:
            raise ValueError("n_angles must be even")
        dl = 2 * math.pi / m
        self.delta = dl
        self.ts = -math.pi + dl * np.arange(m)
        logb = np.log(self.domain.radius_at(self.ts))
        fine = np.log(self.domain.radius_at(np.linspace(-math.pi, math.pi, 20 * m)))
        smin = float(min(fine.min(), logb.min())) - self.pad
        k_min = int(math.floor(smin / dl))
        k_max = int(math.ceil(max(float(fine.max()), float(logb.max())) / dl)) + 1
        self.ss = dl * np.arange(k_min, k_max + 1)
        S, T = np.meshgrid(self.ss, self.ts, indexing="ij")
        self.inside = S < logb[None, :]
        n = int(self.inside.sum())
        self.index = np.full(self.inside.shape, -1, dtype=np.int64)
        self.index[self.inside] = np.arange(n)
        ii, jj = np.nonzero(self.inside)
        ns = len(self.ss)

        rows, cols, vals = [], [], []
        diag = np.zeros(n)
        bnd_rows, bnd_coef, bnd_pts = [], [], []

        # radial direction: bottom row reflects (zero flux), top crossing is exact
        up_in = self.inside[np.minimum(ii + 1, ns - 1), jj] & (ii + 1 < ns)
        arm_up = np.where(up_in, 1.0, np.maximum((logb[jj] - self.ss[ii]) / dl, MIN_ARM))
        down_exists = ii > 0
        arm_dn = np.ones(n)
        for own, other, nb_ok, nb_idx, is_up in (
                (arm_up, arm_dn, up_in, None, True), (arm_dn, arm_up, down_exists, None, False)):
            coef = 2.0 / (own * (own + other))
            diag -= coef
            if is_up:
                r = np.nonzero(nb_ok)[0]
                rows.append(r)
                cols.append(self.index[ii[r] + 1, jj[r]])
                vals.append(coef[r])
                rb = np.nonzero(~nb_ok)[0]
                bnd_rows.append(rb)
                bnd_coef.append(coef[rb])
                bnd_pts.append(np.exp(logb[jj[rb]] + 1j * self.ts[jj[rb]]))
            else:
                r = np.nonzero(nb_ok)[0]
                rows.append(r)
                cols.append(self.index[ii[r] - 1, jj[r]])
                vals.append(coef[r])
                # ghost below the bottom row mirrors the row above
                rb = np.nonzero(~nb_ok)[0]
                rows.append(rb)
                cols.append(self.index[ii[rb] + 1, jj[rb]])
                vals.append(coef[rb])

        # angular direction (periodic)
        arms = {}
        nbrs = {}
        for step in (1, -1):
            jn = (jj + step) % m
            ok = self.inside[ii, jn]
            frac = np.ones(n)
            out = ~ok
            if out.any():
                t0 = self.ts[jj[out]]
                t1 = t0 + step * dl
                tc = _angular_crossing(self.domain, self.ss[ii[out]], t0, t1)
                frac[out] = np.maximum(np.abs(tc - t0) / dl, MIN_ARM)
            arms[step] = frac
            nbrs[step] = (ok, jn, frac)
        for step in (1, -1):
            own, other = arms[step], arms[-step]
            coef = 2.0 / (own * (own + other))
            diag -= coef
            ok, jn, frac = nbrs[step]
            r = np.nonzero(ok)[0]
            rows.append(r)
            cols.append(self.index[ii[r], jn[r]])
            vals.append(coef[r])
            rb = np.nonzero(~ok)[0]
            tb = self.ts[jj[rb]] + step * frac[rb] * dl
            bnd_rows.append(rb)
            bnd_coef.append(coef[rb])
            bnd_pts.append(np.exp(self.ss[ii[rb]] + 1j * tb))
        rows.append(np.arange(n))
        cols.append(np.arange(n))
        vals.append(diag)
        self.matrix = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                                    shape=(n, n))
        self.bnd_rows = np.concatenate(bnd_rows)
        self.bnd_coef = np.concatenate(bnd_coef)
        self.bnd_pts = np.concatenate(bnd_pts)
        self.bnd_labels = self.domain.label_at(np.angle(self.bnd_pts))
        self._lu = spla.splu(self.matrix)

    @property
    def unknowns(self) -> int:
        return self.matrix.shape[0]

    def solve(self, data: BoundaryData, pole: Optional[complex] = None) -> "LogPolarField":
        g = np.asarray(data(self.bnd_labels, self.bnd_pts), dtype=float)
        rhs = np.zeros(self.unknowns)
        np.add.at(rhs, self.bnd_rows, -self.bnd_coef * g)
        u, res = _refined_solve(self.matrix, self._lu, rhs)
        values = np.full(self.inside.shape, np.nan)
        values[self.inside] = u
        return LogPolarField(self.ss, self.ts, self.delta, values, self.domain, data, pole, res)


@functools.lru_cache(maxsize=6)
def logpolar_system(d: StarDomain, n_angles: int) -> LogPolarSystem:
    return LogPolarSystem(d, n_angles)


@dataclass(eq=False)
class LogPolarField:
    """Grid function on a log-polar lattice; same call interface as :class:`ScalarField`."""

    ss: np.ndarray
    ts: np.ndarray
    delta: float
    values: np.ndarray
    domain: StarDomain
    data: BoundaryData
    pole: Optional[complex] = None
    residual: float = 0.0

    @property
    def h(self) -> float:
        """Grid spacing on the unit circle; at radius r it is ``r * delta``."""
        return self.delta

    def local_spacing(self, z):
        return self.delta * np.abs(np.asarray(z))

    __call__ = ScalarField.__call__
    on_boundary = ScalarField.on_boundary
    regular = ScalarField.regular

    def _bilinear(self, z):
        m = len(self.ts)
        with np.errstate(divide="ignore"):
            s = np.log(np.abs(z))
        below = s <= self.ss[0]
        s = np.maximum(s, self.ss[0])
        fs = (s - self.ss[0]) / self.delta
        ft = (np.angle(z) - self.ts[0]) / self.delta
        i = np.clip(np.floor(fs).astype(np.int64), 0, len(self.ss) - 2)
        j = np.floor(ft).astype(np.int64)
        ts_ = fs - i
        tt = ft - j
        j0 = np.mod(j, m)
        j1 = np.mod(j + 1, m)
        v00 = self.values[i, j0]
        v10 = self.values[i + 1, j0]
        v01 = self.values[i, j1]
        v11 = self.values[i + 1, j1]
        out = ((1 - ts_) * (1 - tt) * v00 + ts_ * (1 - tt) * v10
               + (1 - ts_) * tt * v01 + ts_ * tt * v11)
        # below the grid the field is flat to O(r); the ring mean drops the first mode too
        return np.where(below, np.mean(self.values[0]), out)

    def _radial(self, z):
        # quadratic in log-radius through the boundary value and two interior samples
        t = np.angle(z)
        s = np.log(np.abs(z))
        rb = self.domain.radius_at(t)
        sb = np.log(rb)
        vb = self.data(self.domain.label_at(t), rb * np.exp(1j * t))
        s1 = np.full(len(z), np.nan)
        v1 = np.full(len(z), np.nan)
        todo = np.ones(len(z), dtype=bool)
        for k in range(1, 200):
            sk = s - 0.5 * k * self.delta
            cand = self._bilinear(np.exp(sk + 1j * t))
            hit = todo & np.isfinite(cand)
            s1[hit] = sk[hit]
            v1[hit] = cand[hit]
            todo &= ~hit
            if not todo.any():
                break
        s2 = s1 - self.delta
        v2 = self._bilinear(np.exp(s2 + 1j * t))
        quad = ((s - s1) * (s - sb) / ((s2 - s1) * (s2 - sb)) * v2
                + (s - s2) * (s - sb) / ((s1 - s2) * (s1 - sb)) * v1
                + (s - s2) * (s - s1) / ((sb - s2) * (sb - s1)) * vb)
        lin = v1 + (vb - v1) * (s - s1) / (sb - s1)
        return np.where(np.isfinite(v2), quad, lin)

    def angular_derivative_grid(self):
        """Central differences in angle at every interior node (NaN where a neighbour is outside)."""
        v = self.values
        return (np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)) / (2 * self.delta)


def fd_solve_logpolar(d: StarDomain, boundary_data: BoundaryData, n_angles: int = 384) -> LogPolarField:
    return logpolar_system(d, n_angles).solve(boundary_data)


def fd_harmonic_measure_logpolar(d: StarDomain, target, n_angles: int = 384) -> LogPolarField:
    target = np.atleast_1d(np.asarray(target, dtype=np.int64))
    return fd_solve_logpolar(d, lambda labels, _pts: np.isin(labels, target).astype(float), n_angles)


def fd_green_logpolar(d: StarDomain, n_angles: int = 384) -> LogPolarField:
    """Green function with pole 0 on the log-polar grid."""
    return logpolar_system(d, n_angles).solve(lambda _labels, pts: np.log(np.abs(pts)), pole=0j)

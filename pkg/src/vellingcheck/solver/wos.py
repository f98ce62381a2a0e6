"""Walk-on-spheres estimators for harmonic measure and Green functions."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .. import _kernels
from ..geometry import GeometryError, StarDomain

BATCH = 1 << 16
MAX_STEPS = 100_000
BIAS_CONSTANT = 10.0


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    samples: int
    seed: int
    bias_bound: float = 0.0
    capped: int = 0

    def __format__(self, spec: str) -> str:
        return f"{self.value:{spec or '.6f'}} +/- {self.std_error:.2e}"


@dataclass(frozen=True)
class _Moments:
    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        if len(x) == 0:
            return cls(0, 0.0, 0.0)
        m = float(np.mean(x))
        return cls(len(x), m, float(np.sum((x - m) ** 2)))

    def merge(self, other: "_Moments") -> "_Moments":
        n = self.count + other.count
        if n == 0:
            return self
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return _Moments(n, mean, m2)


def _batches(n: int, batch: int) -> list[tuple[int, int]]:
    return [(s, min(batch, n - s)) for s in range(0, n, batch)]


def run_walks(d: StarDomain, start: complex, eps: float, n: int, seed: int,
              score: Callable[[np.ndarray, np.ndarray], np.ndarray],
              workers: int = 1, batch: int = BATCH) -> tuple[_Moments, int]:
    """Run ``n`` trajectories from ``start`` and aggregate ``score(labels, exit_points)``.

    Trajectory ``i`` always uses the random stream ``(seed, i)`` and batches
    are merged in index order, so the result is independent of ``workers``.
    """
    if n < 1:
        raise ValueError("need at least one trajectory")
    if eps <= 0:
        raise ValueError("eps must be positive")
    start = complex(start)
    if not bool(d.contains(start)):
        raise GeometryError(f"start point {start} is outside the domain")
    d0, _ = d.distance_to_boundary(start)
    if eps > d0:
        raise ValueError(f"eps={eps} exceeds the start point's boundary distance {d0:.3g}")
    args = d.tables.args()

    def one(job):
        first, count = job
        labels, ex, ey, _ = _kernels.walk_batch(start.real, start.imag, eps, np.uint64(seed),
                                                first, count, MAX_STEPS, *args)
        s = np.asarray(score(labels, ex + 1j * ey), dtype=float)
        return _Moments.of(s), int(np.sum(labels == -3))

    jobs = _batches(n, batch)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, jobs))
    else:
        results = [one(j) for j in jobs]
    total = _Moments(0, 0.0, 0.0)
    capped = 0
    for m, c in results:
        total = total.merge(m)
        capped += c
    return total, capped


def _estimate(m: _Moments, seed: int, bias: float, capped: int, shift: float = 0.0) -> Estimate:
    var = m.m2 / (m.count - 1) if m.count > 1 else 0.0
    return Estimate(m.mean + shift, math.sqrt(var / m.count), m.count, int(seed), bias, capped)


def wos_harmonic_measure(d: StarDomain, start: complex, target: Iterable[int] | int,
                         eps: float = 1e-4, n: int = 1_000_000, seed: int = 0,
                         workers: int = 1) -> Estimate:
    """Probability that Brownian motion from ``start`` exits through the ``target`` pieces."""
    target = np.atleast_1d(np.asarray(list(target) if not np.isscalar(target) else target,
                                      dtype=np.int64))
    score = lambda labels, _pts: np.isin(labels, target).astype(float)  # noqa: E731
    m, capped = run_walks(d, start, eps, n, seed, score, workers)
    return _estimate(m, seed, BIAS_CONSTANT * (eps + d.polyline_delta), capped)


def wos_green(d: StarDomain, pole: complex, z: complex, eps: float = 1e-4,
              n: int = 1_000_000, seed: int = 0, workers: int = 1) -> Estimate:
    """Green function ``g(z, pole, d)`` as ``-log|z-pole| + E log|Z_exit - pole|``."""
    pole, z = complex(pole), complex(z)
    if not bool(d.contains(pole)):
        raise GeometryError("pole outside the domain")
    if z == pole:
        raise ValueError("Green function is singular at the pole")
    score = lambda _labels, pts: np.log(np.abs(pts - pole))  # noqa: E731
    m, capped = run_walks(d, z, eps, n, seed, score, workers)
    return _estimate(m, seed, BIAS_CONSTANT * (eps + d.polyline_delta), capped,
                     shift=-math.log(abs(z - pole)))

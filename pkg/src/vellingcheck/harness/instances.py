"""Instance generation: explicit opening lists and seeded random partitions."""

from __future__ import annotations

import math

import numpy as np

from ..geometry import OPENING_CAP, ArcPartition, GeometryError, make_partition

MAX_TRIES = 10_000


def random_partition(n_arcs: int, min_opening: float, seed: int) -> ArcPartition:
    """Uniform point of the simplex of openings summing to pi, conditioned on the bounds.

    Openings are normalised exponential spacings, redrawn until every one lies
    in ``[min_opening, pi/2 - 1e-3]``.
    """
    if n_arcs < 3:
        raise ValueError("need at least three arcs")
    if min_opening <= 0 or n_arcs * min_opening >= math.pi:
        raise ValueError("min_opening must be positive with n_arcs * min_opening < pi")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_TRIES):
        e = rng.exponential(size=n_arcs)
        op = math.pi * e / math.fsum(e)
        if op.min() >= min_opening and op.max() <= OPENING_CAP:
            return make_partition(op.tolist())
    raise GeometryError(f"no admissible partition after {MAX_TRIES} draws "
                        f"(n_arcs={n_arcs}, min_opening={min_opening})")


def config_instances(cfg) -> list[tuple[int, ArcPartition]]:
    """Explicit instances first (ids 0..), then the random batch."""
    out = [(i, make_partition(list(op))) for i, op in enumerate(cfg.openings)]
    r = cfg.random
    if r is not None:
        rng = np.random.default_rng(r.seed)
        lo, hi = r.arcs
        for k in range(r.count):
            n = int(rng.integers(lo, hi + 1))
            s = int(rng.integers(0, 2 ** 63 - 1))
            out.append((len(out), random_partition(n, r.min_opening, s)))
    return out

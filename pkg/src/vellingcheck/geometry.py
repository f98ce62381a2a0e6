"""Planar objects: unit-circle arcs, geodesics, star-shaped domains and maps.

All domains built here are star-shaped about the origin and contained in the
closed unit disk.  A :class:`StarDomain` is an ordered tuple of boundary
pieces whose angular spans tile the circle; each piece knows its polar radius
and its exact (or conservative) distance to a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels

TWO_PI = 2.0 * math.pi
OPENING_CAP = math.pi / 2 - 1e-3
SUM_TOL = 1e-12
POLYLINE_DELTA = 1e-5


class GeometryError(ValueError):
    """Invalid geometric input (bad openings, points outside a domain, ...)."""


def wrap_angle(t):
    """Reduce angles to the canonical representative in [-pi, pi)."""
    return np.mod(np.asarray(t, dtype=float) + math.pi, TWO_PI) - math.pi


def _canon(t: float) -> float:
    """Reduce a single angle to [0, 2pi)."""
    t = math.fmod(t, TWO_PI)
    if t < 0:
        t += TWO_PI
    return 0.0 if t >= TWO_PI else t


# --------------------------------------------------------------------------
# arcs and partitions


@dataclass(frozen=True)
class UnitArc:
    center: float
    half_opening: float

    def __post_init__(self):
        if not 0.0 < self.half_opening < math.pi / 2:
            raise GeometryError(f"half opening {self.half_opening} outside (0, pi/2)")

    @property
    def length(self) -> float:
        return 2.0 * self.half_opening

    @property
    def endpoints(self) -> tuple[complex, complex]:
        return (complex(np.exp(1j * (self.center - self.half_opening))),
                complex(np.exp(1j * (self.center + self.half_opening))))

    def contains_direction(self, z) -> np.ndarray:
        """Sector predicate: ``z != 0`` and ``z/|z|`` lies on the closed arc."""
        z = np.asarray(z, dtype=complex)
        off = np.abs(wrap_angle(np.angle(z) - self.center))
        return (z != 0) & (off <= self.half_opening + 1e-13)


@dataclass(frozen=True)
class ArcPartition:
    """Arcs filling the unit circle; index 0 is a longest arc centred at angle 0."""

    arcs: tuple[UnitArc, ...]
    deviations: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.arcs)

    @property
    def openings(self) -> tuple[float, ...]:
        return tuple(a.half_opening for a in self.arcs)

    @property
    def alpha0(self) -> float:
        return self.arcs[0].half_opening

    @property
    def centers(self) -> tuple[float, ...]:
        return tuple(a.center for a in self.arcs)

    def eta(self, k: int) -> complex:
        return complex(np.exp(1j * self.deviations[k]))

    @property
    def is_equal(self) -> bool:
        return max(self.openings) - min(self.openings) < 1e-12

    @property
    def ray_angles(self) -> tuple[float, ...]:
        """Sector-boundary rays; ray ``k`` separates arc ``k`` from arc ``k+1``."""
        return tuple(_canon(a.center + a.half_opening) for a in self.arcs)

    def sector_of(self, z) -> np.ndarray:
        """Index of the sector containing each point; shared rays go to the lower index."""
        t = np.mod(np.angle(np.asarray(z, dtype=complex)) + self.alpha0, TWO_PI)
        ends = np.cumsum([2 * a for a in self.openings])
        idx = np.searchsorted(ends, t, side="left")
        return np.minimum(idx, len(self) - 1)

    def to_dict(self) -> dict:
        return {"openings": list(self.openings)}


def make_partition(openings: Sequence[float], rotation: float = 0.0) -> ArcPartition:
    """Lay arcs of the given half-openings consecutively and normalise.

    The result is rotated so that a longest arc (lowest original index on
    ties) is arc 0 and is centred at angle 0; the remaining arcs follow in
    counter-clockwise order.
    """
    ops = [float(a) for a in openings]
    if len(ops) < 3:
        raise GeometryError("need at least 3 arcs")
    for a in ops:
        if not 0.0 < a < math.pi / 2:
            raise GeometryError(f"opening {a} outside (0, pi/2)")
    if abs(math.fsum(ops) - math.pi) > SUM_TOL:
        raise GeometryError(f"openings sum to {math.fsum(ops)!r}, expected pi")

    # rotation only fixes where the arcs are laid before normalisation
    j0 = max(range(len(ops)), key=lambda j: (ops[j], -j))
    ordered = [ops[(j0 + i) % len(ops)] for i in range(len(ops))]
    arcs = [UnitArc(0.0, ordered[0])]
    for i in range(1, len(ordered)):
        c = math.fsum([ordered[0], ordered[i]] + [2 * o for o in ordered[1:i]])
        arcs.append(UnitArc(_canon(c), ordered[i]))
    a0 = arcs[0].half_opening
    devs = tuple(a0 - a.half_opening for a in arcs)
    return ArcPartition(tuple(arcs), devs)


def partition_from_dict(d: dict) -> ArcPartition:
    return make_partition(d["openings"], d.get("rotation", 0.0))


# --------------------------------------------------------------------------
# geodesics and polar graphs


@dataclass(frozen=True)
class GeodesicArc:
    arc: UnitArc
    circle_center: complex
    circle_radius: float
    min_radius: float

    def radius_at(self, t):
        """Polar radius of the geodesic along the ray at offset ``t`` from the arc centre."""
        a = abs(self.circle_center)
        p = a * np.cos(np.asarray(t, dtype=float))
        # near root of r^2 - 2pr + 1 = 0, written without cancellation
        return 1.0 / (p + np.sqrt(np.maximum(p * p - 1.0, 0.0)))


def geodesic_of(arc: UnitArc) -> GeodesicArc:
    ca = math.cos(arc.half_opening)
    c = complex(np.exp(1j * arc.center)) / ca
    return GeodesicArc(arc, c, math.tan(arc.half_opening),
                       (1.0 - math.sin(arc.half_opening)) / ca)


def geodesic_radius_at(g: GeodesicArc, t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > g.arc.half_opening + 1e-12):
        raise GeometryError("offset beyond the arc's half opening")
    return g.radius_at(t)


@dataclass(frozen=True, eq=False)
class PolarArc:
    """Basic arc: even polar graph on [-a0, a0], minimal at 0, increasing in |t|, 1 at the ends."""

    half_opening: float
    radius_fn: Callable[[np.ndarray], np.ndarray]
    rho0: float
    kind: str = "custom"

    def __call__(self, t):
        return self.radius_fn(np.asarray(t, dtype=float))

    @classmethod
    def geodesic(cls, half_opening: float) -> "PolarArc":
        g = geodesic_of(UnitArc(0.0, half_opening))
        return cls(half_opening, g.radius_at, g.min_radius, "geodesic")

    @classmethod
    def power(cls, half_opening: float, rho0: float, exponent: float = 2.0) -> "PolarArc":
        """``R(t) = rho0 + (1 - rho0) |t/a0|^p``: a non-geodesic basic arc for tests."""
        a0 = half_opening
        fn = lambda t: rho0 + (1.0 - rho0) * np.abs(t / a0) ** exponent  # noqa: E731
        return cls(half_opening, fn, rho0, f"power:{rho0}:{exponent}")

    def validate(self, samples: int = 2001) -> None:
        t = np.linspace(0.0, self.half_opening, samples)
        r = self(t)
        # R(t) ~ 1 - c sqrt(a0 - t) near the ends, so rounding shows up at the 1e-8 level
        if abs(r[-1] - 1.0) > 1e-7 or abs(self(-self.half_opening) - 1.0) > 1e-7:
            raise GeometryError("basic arc must reach the unit circle at its ends")
        if not np.allclose(self(-t), r, atol=1e-13, rtol=0):
            raise GeometryError("basic arc radius must be even")
        if np.any(np.diff(r) <= 0) or not 0 < r[0] < 1 or abs(r[0] - self.rho0) > 1e-12:
            raise GeometryError("basic arc radius must increase strictly from rho0 < 1")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "half_opening": self.half_opening, "rho0": self.rho0}
        if self.kind.startswith("power:"):
            d["exponent"] = float(self.kind.split(":")[2])
        return d


def polar_arc_from_dict(d: dict, half_opening: Optional[float] = None) -> PolarArc:
    if half_opening is None:
        half_opening = float(d["half_opening"])
    kind = d.get("kind", "geodesic")
    if kind == "geodesic":
        return PolarArc.geodesic(half_opening)
    if kind == "power" or kind.startswith("power"):
        return PolarArc.power(half_opening, float(d["rho0"]), float(d.get("exponent", 2.0)))
    raise GeometryError(f"unknown basic arc kind {kind!r}")


# --------------------------------------------------------------------------
# boundary pieces


@dataclass(frozen=True, eq=False)
class CirclePiece:
    """Piece of the circle ``|z - c| = r`` seen from the origin over ``[start, start+width]``.

    ``outer`` selects the far intersection of each ray with the circle (used
    when the origin lies inside the circle, as for the unit circle itself).
    """

    center: complex
    radius: float
    start: float
    width: float
    label: int
    kind: str = "geodesic"

    @property
    def outer(self) -> bool:
        return abs(self.center) < self.radius

    def radius_at(self, t):
        c = self.center
        p = c.real * np.cos(t) + c.imag * np.sin(t)
        q = abs(c) ** 2 - self.radius ** 2
        if abs(q - 1.0) < 1e-9:
            # orthogonal to the unit circle: power exactly 1, avoids sqrt blow-up at the ends
            q = 1.0
        root = np.sqrt(np.maximum(p * p - q, 0.0))
        return p + root if self.outer else q / (p + root)

    def point(self, t):
        return self.radius_at(t) * np.exp(1j * np.asarray(t))

    def parametrize(self, n: int):
        """Points, unit inward normals and arc-length weights along the piece."""
        p0 = complex(self.point(self.start))
        p1 = complex(self.point(self.start + self.width))
        a0 = np.angle(p0 - self.center)
        a1 = np.angle(p1 - self.center)
        mid = complex(self.point(self.start + self.width / 2)) - self.center
        am = np.angle(mid)
        lo = float(wrap_angle(a0 - am))
        hi = float(wrap_angle(a1 - am))
        if self.width >= TWO_PI - 1e-12:
            lo, hi = -math.pi, math.pi
        phi = am + np.linspace(lo, hi, n)
        pts = self.center + self.radius * np.exp(1j * phi)
        normal = np.exp(1j * phi)
        normal = np.where((normal * np.conj(-pts)).real > 0, normal, -normal)
        w = np.full(n, abs(hi - lo) * self.radius / (n - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
        return pts, normal, w

    def table_row(self) -> list[float]:
        t0, t1 = self.start, self.start + self.width
        p0 = complex(self.point(t0))
        p1 = complex(self.point(t1))
        mid = complex(self.point((t0 + t1) / 2)) - self.center
        am = math.atan2(mid.imag, mid.real)
        if self.width >= TWO_PI - 1e-12:
            lo, hi = -4.0, 4.0
        else:
            lo = float(wrap_angle(math.atan2((p0 - self.center).imag, (p0 - self.center).real) - am))
            hi = float(wrap_angle(math.atan2((p1 - self.center).imag, (p1 - self.center).real) - am))
            lo, hi = min(lo, hi), max(lo, hi)
        return [self.center.real, self.center.imag, self.radius, p0.real, p0.imag,
                p1.real, p1.imag, am, lo, hi]


@dataclass(frozen=True, eq=False)
class ChordPiece:
    a: complex
    b: complex
    start: float
    width: float
    label: int
    kind: str = "chord"

    def radius_at(self, t):
        n = (self.b - self.a) * 1j
        num = n.real * self.a.real + n.imag * self.a.imag
        return num / (n.real * np.cos(t) + n.imag * np.sin(t))

    def point(self, t):
        return self.radius_at(t) * np.exp(1j * np.asarray(t))

    def parametrize(self, n: int):
        s = np.linspace(0.0, 1.0, n)
        pts = self.a + s * (self.b - self.a)
        nrm = (self.b - self.a) * 1j / abs(self.b - self.a)
        if (nrm * np.conj(-pts[n // 2])).real < 0:
            nrm = -nrm
        w = np.full(n, abs(self.b - self.a) / (n - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
        return pts, np.full(n, nrm), w


@dataclass(frozen=True, eq=False)
class PolarGraphPiece:
    """Polar graph ``t -> fn(t - center)`` for ``|t - center| <= half_width``."""

    center: float
    half_width: float
    fn: Callable[[np.ndarray], np.ndarray]
    label: int
    kind: str = "polar"

    @property
    def start(self) -> float:
        return self.center - self.half_width

    @property
    def width(self) -> float:
        return 2.0 * self.half_width

    def radius_at(self, t):
        s = np.clip(wrap_angle(np.asarray(t) - self.center), -self.half_width, self.half_width)
        return self.fn(s)

    def point(self, t):
        return self.radius_at(t) * np.exp(1j * np.asarray(t))

    def parametrize(self, n: int):
        fine = max(8 * n, 4001)
        s = np.linspace(-self.half_width, self.half_width, fine)
        z = self.fn(s) * np.exp(1j * (s + self.center))
        arclen = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(z)))])
        target = np.linspace(0.0, arclen[-1], n)
        sp = np.interp(target, arclen, s)
        pts = self.fn(sp) * np.exp(1j * (sp + self.center))
        ds = 1e-6
        tang = (self.fn(np.minimum(sp + ds, self.half_width)) * np.exp(1j * (np.minimum(sp + ds, self.half_width) + self.center))
                - self.fn(np.maximum(sp - ds, -self.half_width)) * np.exp(1j * (np.maximum(sp - ds, -self.half_width) + self.center)))
        nrm = 1j * tang / np.abs(tang)
        nrm = np.where((nrm * np.conj(-pts)).real > 0, nrm, -nrm)
        w = np.full(n, arclen[-1] / (n - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
        return pts, nrm, w

    def polyline(self, delta: float = POLYLINE_DELTA) -> tuple[np.ndarray, float]:
        """Vertices of an inscribed polyline and its measured Hausdorff error."""
        s = list(np.linspace(-self.half_width, self.half_width, 257))
        pt = lambda u: complex(self.fn(np.asarray(u)) * np.exp(1j * (u + self.center)))  # noqa: E731
        out = [s[0]]
        stack = [(s[i + 1], s[i]) for i in range(len(s) - 2, -1, -1)]
        worst = 0.0
        while stack:
            b, a = stack.pop()
            pa, pb = pt(a), pt(b)
            m = 0.5 * (a + b)
            pm = pt(m)
            dev = _point_segment(pm, pa, pb)
            q1 = pt(0.5 * (a + m))
            q3 = pt(0.5 * (m + b))
            dev = max(dev, _point_segment(q1, pa, pb), _point_segment(q3, pa, pb))
            if dev > delta / 4 and b - a > 1e-12:
                stack.append((b, m))
                stack.append((m, a))
            else:
                worst = max(worst, dev)
                out.append(b)
        verts = np.array([pt(u) for u in out])
        return verts, max(2.0 * worst, 1e-12)


def _point_segment(p: complex, a: complex, b: complex) -> float:
    d = b - a
    ll = abs(d) ** 2
    t = 0.0 if ll == 0 else min(1.0, max(0.0, ((p - a) * d.conjugate()).real / ll))
    return abs(p - (a + t * d))


Piece = CirclePiece | ChordPiece | PolarGraphPiece


@dataclass(frozen=True)
class BoundaryTables:
    """Flat arrays consumed by the compiled boundary query."""

    arcs: np.ndarray
    arc_labels: np.ndarray
    segs: np.ndarray
    seg_labels: np.ndarray
    soup: np.ndarray
    soup_labels: np.ndarray
    grid_meta: np.ndarray
    cell_dist: np.ndarray
    cell_ptr: np.ndarray
    cell_idx: np.ndarray
    soup_delta: float

    def args(self) -> tuple:
        return (self.arcs, self.arc_labels, self.segs, self.seg_labels, self.soup,
                self.soup_labels, self.grid_meta, self.cell_dist, self.cell_ptr,
                self.cell_idx, self.soup_delta)


def _build_tables(pieces: Sequence[Piece], cells: int = 64) -> BoundaryTables:
    arcs, arc_labels, segs, seg_labels = [], [], [], []
    soup, soup_labels = [], []
    delta = 0.0
    for p in pieces:
        if isinstance(p, CirclePiece):
            arcs.append(p.table_row())
            arc_labels.append(p.label)
        elif isinstance(p, ChordPiece):
            segs.append([p.a.real, p.a.imag, p.b.real, p.b.imag])
            seg_labels.append(p.label)
        else:
            verts, d = p.polyline()
            delta = max(delta, d)
            for a, b in zip(verts[:-1], verts[1:]):
                soup.append([a.real, a.imag, b.real, b.imag])
                soup_labels.append(p.label)
    arcs_a = np.array(arcs, dtype=float).reshape(-1, 10)
    segs_a = np.array(segs, dtype=float).reshape(-1, 4)
    soup_a = np.array(soup, dtype=float).reshape(-1, 4)
    x0 = y0 = -1.0 - 1e-9
    cs = (2.0 + 2e-9) / cells
    meta = np.array([x0, y0, cs, float(cells)])
    if len(soup_a) == 0:
        cell_dist = np.zeros(1)
        ptr = np.zeros(1, dtype=np.int64)
        idx = np.zeros(0, dtype=np.int64)
    else:
        ii, jj = np.meshgrid(np.arange(cells), np.arange(cells), indexing="ij")
        cx = (x0 + (ii.ravel() + 0.5) * cs)
        cy = (y0 + (jj.ravel() + 0.5) * cs)
        dmat = _segments_distance_matrix(cx, cy, soup_a)
        cell_dist = dmat.min(axis=1)
        half_diag = cs * math.sqrt(2.0) / 2
        ptr = [0]
        idx = []
        for c in range(cells * cells):
            if cell_dist[c] <= 3.0 * half_diag:
                sel = np.nonzero(dmat[c] <= cell_dist[c] + 2.0 * half_diag + 1e-12)[0]
                idx.extend(sel.tolist())
            ptr.append(len(idx))
        ptr = np.array(ptr, dtype=np.int64)
        idx = np.array(idx, dtype=np.int64)
    return BoundaryTables(arcs_a, np.array(arc_labels, dtype=np.int64), segs_a,
                          np.array(seg_labels, dtype=np.int64), soup_a,
                          np.array(soup_labels, dtype=np.int64), meta, cell_dist,
                          ptr, idx, float(delta))


def _segments_distance_matrix(px, py, segs):
    ax, ay, bx, by = (segs[:, i][None, :] for i in range(4))
    dx, dy = bx - ax, by - ay
    ll = dx * dx + dy * dy
    t = np.clip(((px[:, None] - ax) * dx + (py[:, None] - ay) * dy) / np.where(ll > 0, ll, 1.0), 0.0, 1.0)
    return np.hypot(px[:, None] - ax - t * dx, py[:, None] - ay - t * dy)


# --------------------------------------------------------------------------
# star domains


@dataclass(frozen=True, eq=False)
class StarDomain:
    """Star-shaped domain given by boundary pieces tiling the angular range."""

    pieces: tuple[Piece, ...]
    name: str = "domain"
    conj_symmetric: bool = False
    _starts: np.ndarray = field(init=False, repr=False)
    _ends: np.ndarray = field(init=False, repr=False)
    _tables: list = field(init=False, repr=False, default_factory=list)

    def __post_init__(self):
        base = self.pieces[0].start
        offs = np.array([np.mod(p.start - base, TWO_PI) for p in self.pieces])
        widths = np.array([p.width for p in self.pieces])
        if abs(widths.sum() - TWO_PI) > 1e-9:
            raise GeometryError(f"piece spans sum to {widths.sum()}, expected 2pi")
        ends = offs + widths
        if np.any(np.abs(offs[1:] - ends[:-1]) > 1e-9):
            raise GeometryError("piece spans must be consecutive")
        object.__setattr__(self, "_starts", offs)
        object.__setattr__(self, "_ends", ends)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(sorted({p.label for p in self.pieces}))

    @property
    def tables(self) -> BoundaryTables:
        if not self._tables:
            self._tables.append(_build_tables(self.pieces))
        return self._tables[0]

    @property
    def polyline_delta(self) -> float:
        return self.tables.soup_delta

    def piece_index(self, t) -> np.ndarray:
        u = np.mod(np.asarray(t, dtype=float) - self.pieces[0].start, TWO_PI)
        idx = np.searchsorted(self._ends, u, side="right")
        return np.minimum(idx, len(self.pieces) - 1)

    def radius_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = self.piece_index(t)
        out = np.empty(t.shape)
        for k in np.unique(idx):
            m = idx == k
            out[m] = self.pieces[k].radius_at(t[m])
        return out

    def label_at(self, t) -> np.ndarray:
        lab = np.array([p.label for p in self.pieces])
        return lab[self.piece_index(t)]

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.abs(z) < self.radius_at(np.angle(z))

    def boundary_point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.radius_at(t) * np.exp(1j * t)

    def query(self, z):
        """Distance lower bound, nearest label and nearest boundary point for each point."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        d, lab, px, py = _kernels.boundary_query_many(
            np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag), *self.tables.args())
        return d, lab, px + 1j * py

    def distance_to_boundary(self, z):
        """Return ``(distance lower bound, nearest piece label)``; raises for exterior points."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        if not np.all(self.contains(zz)):
            raise GeometryError("distance_to_boundary needs interior points")
        d, lab, _ = self.query(zz)
        if np.ndim(z) == 0:
            return float(d[0]), int(lab[0])
        return d, lab

    def pieces_with_label(self, labels) -> list[Piece]:
        labels = {labels} if isinstance(labels, (int, np.integer)) else set(labels)
        return [p for p in self.pieces if p.label in labels]

    def sample_boundary(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Dense boundary sample (points, labels), used by brute-force oracles."""
        pts, labs = [], []
        for p in self.pieces:
            m = max(16, int(n * p.width / TWO_PI))
            t = p.start + np.linspace(0.0, p.width, m)
            pts.append(p.point(t))
            labs.append(np.full(m, p.label))
        return np.concatenate(pts), np.concatenate(labs)

    def kdtree(self, n: int = 200_000) -> cKDTree:
        pts, _ = self.sample_boundary(n)
        return cKDTree(np.column_stack([pts.real, pts.imag]))


# --------------------------------------------------------------------------
# domain constructors


def unit_disk() -> StarDomain:
    return StarDomain((CirclePiece(0j, 1.0, -math.pi, TWO_PI, 0, "circle"),), "disk", True)


def labeled_disk(p: ArcPartition) -> StarDomain:
    """Unit disk whose boundary pieces are the arcs of ``p`` (label = arc index)."""
    pieces = tuple(CirclePiece(0j, 1.0, a.center - a.half_opening, a.length, k, "circle")
                   for k, a in enumerate(p.arcs))
    return StarDomain(pieces, "labeled-disk")


def arc_disk(half_opening: float, center: float = 0.0) -> StarDomain:
    """Unit disk with one marked arc (label 0); the rest of the circle has label 1."""
    a = half_opening
    pieces = (CirclePiece(0j, 1.0, center - a, 2 * a, 0, "circle"),
              CirclePiece(0j, 1.0, center + a, TWO_PI - 2 * a, 1, "circle"))
    return StarDomain(pieces, "arc-disk", center == 0.0)


def lens_domain(half_opening: float) -> StarDomain:
    """Unit disk minus the single lens over the arc ``[-a, a]``; geodesic has label 0."""
    g = geodesic_of(UnitArc(0.0, half_opening))
    a = half_opening
    pieces = (CirclePiece(g.circle_center, g.circle_radius, -a, 2 * a, 0),
              CirclePiece(0j, 1.0, a, TWO_PI - 2 * a, 1, "circle"))
    return StarDomain(pieces, "lens", True)


def velling_domain(p: ArcPartition) -> StarDomain:
    pieces = []
    for k, arc in enumerate(p.arcs):
        g = geodesic_of(arc)
        pieces.append(CirclePiece(g.circle_center, g.circle_radius,
                                  arc.center - arc.half_opening, arc.length, k))
    return StarDomain(tuple(pieces), "velling", _conj_symmetric(p))


def basic_domain(p: ArcPartition, basic: PolarArc) -> StarDomain:
    """Basic model domain: over arc ``k`` the radius is ``R(|s| + d_k)``."""
    if abs(basic.half_opening - p.alpha0) > 1e-12:
        raise GeometryError("basic arc half opening must equal the longest arc's")
    pieces = []
    a0 = p.alpha0
    for k, arc in enumerate(p.arcs):
        d = p.deviations[k]
        if basic.kind == "geodesic":
            r = math.tan(a0)
            for sign in (-1, 1):
                c = complex(np.exp(1j * (arc.center - sign * d))) / math.cos(a0)
                start = arc.center - arc.half_opening if sign < 0 else arc.center
                pieces.append(CirclePiece(c, r, start, arc.half_opening, k, "basic"))
        else:
            fn = (lambda s, d=d: basic(np.abs(s) + d))
            pieces.append(PolarGraphPiece(arc.center, arc.half_opening, fn, k, "basic"))
    return StarDomain(tuple(pieces), "basic", _conj_symmetric(p))


def polygon_domain(p: ArcPartition) -> StarDomain:
    pieces = []
    for k, arc in enumerate(p.arcs):
        a, b = arc.endpoints
        pieces.append(ChordPiece(a, b, arc.center - arc.half_opening, arc.length, k))
    return StarDomain(tuple(pieces), "polygon", _conj_symmetric(p))


def omega_domain(basic: PolarArc, omega0: float) -> StarDomain:
    """Image of the basic sector piece under the power map, origin adjoined."""
    if not 0.0 < omega0 < 0.5:
        raise GeometryError("omega0 must lie in (0, 1/2)")
    if abs(omega0 - basic.half_opening / math.pi) > 1e-12:
        raise GeometryError("omega0 must equal alpha0/pi")
    a0 = basic.half_opening
    fn = lambda s: basic(np.asarray(s) * a0 / math.pi) ** (math.pi / a0)  # noqa: E731
    return StarDomain((PolarGraphPiece(0.0, math.pi, fn, 0, "omega"),), "omega", True)


def _conj_symmetric(p: ArcPartition) -> bool:
    ops = p.openings
    n = len(ops)
    return all(abs(ops[k] - ops[(n - k) % n]) < 1e-14 for k in range(n))


# --------------------------------------------------------------------------
# maps


def power_map(z, omega0: float, inverse: bool = False):
    """Branch of ``z**(1/omega0)`` fixing 1 (``inverse`` gives ``z**omega0``)."""
    z = np.asarray(z, dtype=complex)
    p = omega0 if inverse else 1.0 / omega0
    r = np.abs(z)
    out = r ** p * np.exp(1j * np.angle(z) * p)
    return np.where(r == 0, 0j, out)


def reflect_across_ray(z, ray_angle: float):
    return np.exp(2j * ray_angle) * np.conj(np.asarray(z, dtype=complex))

"""Compiled boundary queries and the walk-on-spheres loop.

Boundary geometry is passed as flat tables (see ``geometry.BoundaryTables``):

* circle arcs: rows ``(cx, cy, r, p1x, p1y, p2x, p2y, mid_angle, lo, hi)``;
  a point whose direction from the centre lies in ``[lo, hi]`` relative to
  ``mid_angle`` projects onto the arc interior, otherwise onto an endpoint.
* segments: rows ``(p1x, p1y, p2x, p2y)``.
* polyline soup: segments of polar-graph pieces, indexed by a uniform cell
  grid so that queries touch only nearby segments.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

_TWO_PI = 2.0 * math.pi
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


@nb.njit(cache=True, inline="always")
def _wrap(a):
    return a - _TWO_PI * math.floor((a + math.pi) / _TWO_PI)


@nb.njit(cache=True)
def _seg_dist(x, y, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    ll = dx * dx + dy * dy
    t = 0.0
    if ll > 0.0:
        t = ((x - ax) * dx + (y - ay) * dy) / ll
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    px = ax + t * dx
    py = ay + t * dy
    return math.hypot(x - px, y - py), px, py


@nb.njit(cache=True)
def _arc_dist(x, y, row):
    cx, cy, r = row[0], row[1], row[2]
    vx = x - cx
    vy = y - cy
    nv = math.hypot(vx, vy)
    if nv > 0.0:
        rel = _wrap(math.atan2(vy, vx) - row[7])
        if row[8] <= rel <= row[9]:
            return abs(nv - r), cx + r * vx / nv, cy + r * vy / nv
    d1 = math.hypot(x - row[3], y - row[4])
    d2 = math.hypot(x - row[5], y - row[6])
    if d1 <= d2:
        return d1, row[3], row[4]
    return d2, row[5], row[6]


@nb.njit(cache=True)
def boundary_query(x, y, arcs, arc_labels, segs, seg_labels,
                   soup, soup_labels, grid_meta, cell_dist, cell_ptr, cell_idx, soup_delta,
                   exhaustive=False):
    """Return ``(distance lower bound, label, nearest x, nearest y)``.

    Far from every polyline the cell bound is returned with label -2 unless
    ``exhaustive`` asks for a scan of the whole soup.
    """
    best = np.inf
    lab = -1
    nx = x
    ny = y
    for k in range(arcs.shape[0]):
        d, px, py = _arc_dist(x, y, arcs[k])
        if d < best:
            best, lab, nx, ny = d, arc_labels[k], px, py
    for k in range(segs.shape[0]):
        s = segs[k]
        d, px, py = _seg_dist(x, y, s[0], s[1], s[2], s[3])
        if d < best:
            best, lab, nx, ny = d, seg_labels[k], px, py
    if soup.shape[0] > 0:
        x0, y0, cs = grid_meta[0], grid_meta[1], grid_meta[2]
        m = int(grid_meta[3])
        i = int((x - x0) / cs)
        j = int((y - y0) / cs)
        if i < 0:
            i = 0
        elif i >= m:
            i = m - 1
        if j < 0:
            j = 0
        elif j >= m:
            j = m - 1
        c = i * m + j
        ccx = x0 + (i + 0.5) * cs
        ccy = y0 + (j + 0.5) * cs
        far = cell_dist[c] - math.hypot(x - ccx, y - ccy)
        if exhaustive:
            sbest = np.inf
            slab = -1
            sx = x
            sy = y
            for q in range(soup.shape[0]):
                s = soup[q]
                d, px, py = _seg_dist(x, y, s[0], s[1], s[2], s[3])
                if d < sbest:
                    sbest, slab, sx, sy = d, soup_labels[q], px, py
            sbest -= soup_delta
            if sbest < best:
                best, lab, nx, ny = sbest, slab, sx, sy
        elif cell_ptr[c + 1] == cell_ptr[c]:
            # no segment listed: the cell is far from every polyline
            if far - soup_delta < best:
                best = far - soup_delta
                lab = -2
        else:
            sbest = np.inf
            slab = -1
            sx = x
            sy = y
            for q in range(cell_ptr[c], cell_ptr[c + 1]):
                s = soup[cell_idx[q]]
                d, px, py = _seg_dist(x, y, s[0], s[1], s[2], s[3])
                if d < sbest:
                    sbest, slab, sx, sy = d, soup_labels[cell_idx[q]], px, py
            sbest -= soup_delta
            if sbest < best:
                best, lab, nx, ny = sbest, slab, sx, sy
        if best < 0.0:
            best = 0.0
    return best, lab, nx, ny


@nb.njit(cache=True)
def boundary_query_many(xs, ys, arcs, arc_labels, segs, seg_labels,
                        soup, soup_labels, grid_meta, cell_dist, cell_ptr, cell_idx, soup_delta):
    n = xs.shape[0]
    dist = np.empty(n)
    labels = np.empty(n, dtype=np.int64)
    px = np.empty(n)
    py = np.empty(n)
    for i in range(n):
        d, lab, a, b = boundary_query(xs[i], ys[i], arcs, arc_labels, segs, seg_labels,
                                      soup, soup_labels, grid_meta, cell_dist,
                                      cell_ptr, cell_idx, soup_delta, True)
        dist[i] = d
        labels[i] = lab
        px[i] = a
        py[i] = b
    return dist, labels, px, py


@nb.njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@nb.njit(cache=True)
def stream_state(seed, index):
    """Initial splitmix64 state of trajectory ``index`` under ``seed``."""
    return _mix64(np.uint64(seed) ^ _mix64(np.uint64(index) * _GOLDEN + np.uint64(1)))


@nb.njit(cache=True)
def uniform_stream(seed, index, count):
    """First ``count`` uniforms in [0, 1) of one trajectory's stream."""
    out = np.empty(count)
    s = stream_state(seed, index)
    for k in range(count):
        s = s + _GOLDEN
        out[k] = (_mix64(s) >> np.uint64(11)) * (1.0 / 9007199254740992.0)
    return out


@nb.njit(cache=True, nogil=True)
def walk_batch(x0, y0, eps, seed, first, count, max_steps, arcs, arc_labels, segs, seg_labels,
               soup, soup_labels, grid_meta, cell_dist, cell_ptr, cell_idx, soup_delta):
    """Run trajectories ``first .. first+count-1``; return exit labels, points and step counts.

    Every trajectory draws from its own splitmix64 stream keyed by
    ``(seed, trajectory index)``, so results do not depend on batching.
    A trajectory that hits ``max_steps`` is reported with label -3.
    """
    labels = np.empty(count, dtype=np.int64)
    ex = np.empty(count)
    ey = np.empty(count)
    steps = np.empty(count, dtype=np.int64)
    for t in range(count):
        s = stream_state(seed, first + t)
        x = x0
        y = y0
        k = 0
        while True:
            d, lab, px, py = boundary_query(x, y, arcs, arc_labels, segs, seg_labels,
                                            soup, soup_labels, grid_meta, cell_dist,
                                            cell_ptr, cell_idx, soup_delta)
            if d < eps:
                labels[t] = lab
                ex[t] = px
                ey[t] = py
                break
            if k >= max_steps:
                labels[t] = -3
                ex[t] = px
                ey[t] = py
                break
            s = s + _GOLDEN
            u = (_mix64(s) >> np.uint64(11)) * (1.0 / 9007199254740992.0)
            a = _TWO_PI * u
            x += d * math.cos(a)
            y += d * math.sin(a)
            k += 1
        steps[t] = k
    return labels, ex, ey, steps

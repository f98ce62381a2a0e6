"""SVG figures of the domains (lenses, geodesics, basic arcs) and of check margins.

Figures are drawn on bare ``Figure`` objects (no pyplot state) and saved with
a fixed hash salt and no date stamp, so the same input gives the same bytes.
"""

from __future__ import annotations

import math

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Polygon

from ..geometry import (ArcPartition, PolarArc, StarDomain, basic_domain, geodesic_of, polygon_domain,
                        velling_domain)
from ..velling import VellingInstance

SVG_RC = {"svg.hashsalt": "vellingcheck", "svg.fonttype": "path", "font.size": 9,
          "axes.linewidth": 0.6}
ARC_COLORS = ("#1b6ca8", "#d1495b", "#edae49", "#00798c", "#66a182", "#8d6a9f", "#2e4057", "#c1666b")


def _save(fig: Figure, path) -> None:
    with mpl.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})


def _outline(d: StarDomain, n: int = 2048) -> np.ndarray:
    t = np.linspace(-math.pi, math.pi, n)
    return d.radius_at(t) * np.exp(1j * t)


def _lens(arc, n: int = 200) -> np.ndarray:
    """Closed outline of the lens between a unit-circle arc and its geodesic."""
    g = geodesic_of(arc)
    t = arc.center + np.linspace(-arc.half_opening, arc.half_opening, n)
    inner = g.radius_at(t - arc.center) * np.exp(1j * t)
    outer = np.exp(1j * t[::-1])
    return np.concatenate([inner, outer])


def _field_image(ax, d: StarDomain, field, res: int):
    xs = np.linspace(-1, 1, res)
    X, Y = np.meshgrid(xs, xs)
    Z = X + 1j * Y
    inside = d.contains(Z) & (np.abs(Z) > 1e-9)
    V = np.full(Z.shape, np.nan)
    V[inside] = field(Z[inside])
    V[~np.isfinite(V)] = np.nan
    hi = np.nanpercentile(V, 99) if np.isfinite(V).any() else 1.0
    im = ax.pcolormesh(X, Y, np.minimum(V, hi), shading="auto", cmap="viridis", rasterized=False)
    return im


def render_svg(obj, field=None, path="domain.svg", res: int = 161) -> None:
    """Draw the unit circle, arcs, geodesics, lenses and basic arcs; optional field heatmap.

    ``obj`` is a :class:`VellingInstance`, an :class:`ArcPartition` or a bare
    :class:`StarDomain` (then only its boundary is drawn).
    """
    fig = Figure(figsize=(4.6, 4.2))
    ax = fig.add_subplot(1, 1, 1)
    ax.set_aspect("equal")
    ax.set_xlim(-1.12, 1.12)
    ax.set_ylim(-1.12, 1.12)
    ax.set_xticks([-1, 0, 1])
    ax.set_yticks([-1, 0, 1])
    t = np.linspace(-math.pi, math.pi, 721)
    ax.plot(np.cos(t), np.sin(t), color="0.6", lw=0.6, ls=":")

    if isinstance(obj, StarDomain):
        p, dom, dc = None, obj, None
    else:
        p = obj.partition if isinstance(obj, VellingInstance) else obj
        if not isinstance(p, ArcPartition):
            raise TypeError("render_svg needs an instance, a partition or a domain")
        dom = obj.D if isinstance(obj, VellingInstance) else velling_domain(p)
        dc = obj.Dcirc if isinstance(obj, VellingInstance) else basic_domain(p, PolarArc.geodesic(p.alpha0))

    if field is not None:
        # sample over the field's own domain; instance fields (phi, u) live on the basic domain
        sample = getattr(field, "domain", None) or (dc if isinstance(obj, VellingInstance) else dom)
        im = _field_image(ax, sample, field, res)
        fig.colorbar(im, ax=ax, shrink=0.8, label="field")

    if p is not None:
        for k, arc in enumerate(p.arcs):
            c = ARC_COLORS[k % len(ARC_COLORS)]
            lens = _lens(arc)
            ax.add_patch(Polygon(np.column_stack([lens.real, lens.imag]), closed=True,
                                 facecolor=c, alpha=0.18, edgecolor="none"))
            s = arc.center + np.linspace(-arc.half_opening, arc.half_opening, 200)
            ax.plot(np.cos(s), np.sin(s), color=c, lw=1.8, label=f"$L_{k}$" if k < 8 else None)
        z = _outline(dom)
        ax.plot(z.real, z.imag, color="k", lw=0.9, label="geodesics $I_k$")
        zc = _outline(dc)
        ax.plot(zc.real, zc.imag, color="#d1495b", lw=0.9, ls="--", label="basic domain")
        zp = _outline(polygon_domain(p))
        ax.plot(zp.real, zp.imag, color="0.4", lw=0.6, ls="-.", label="polygon")
        ax.set_title(f"{len(p.arcs)} arcs, $\\omega_0$ = {p.alpha0 / math.pi:.4f}")
    else:
        z = _outline(dom)
        ax.plot(z.real, z.imag, color="k", lw=0.9, label=dom.name)
    ax.legend(loc="upper center", bbox_to_anchor=(0.5, -0.06), fontsize=6, frameon=False, ncol=4)
    fig.subplots_adjust(bottom=0.16)
    _save(fig, path)


def render_margins(rows, path) -> None:
    """Margin of every row, grouped by check; failed rows in red."""
    checks = sorted({r.check for r in rows})
    fig = Figure(figsize=(6.0, 3.2))
    ax = fig.add_subplot(1, 1, 1)
    for i, c in enumerate(checks):
        sel = [r for r in rows if r.check == c]
        m = np.array([r.margin for r in sel], dtype=float)
        ok = np.array([r.passed for r in sel])
        x = np.full(len(sel), i) + np.linspace(-0.3, 0.3, len(sel)) if len(sel) > 1 else np.full(1, i)
        ax.scatter(x[ok], m[ok], s=6, color="#00798c")
        ax.scatter(x[~ok], m[~ok], s=10, color="#d1495b", marker="x")
    ax.axhline(0.0, color="0.5", lw=0.6)
    ax.set_xticks(range(len(checks)))
    ax.set_xticklabels(checks, rotation=30, ha="right")
    ax.set_ylabel("margin")
    ax.set_yscale("symlog", linthresh=1e-3)
    fig.tight_layout()
    _save(fig, path)

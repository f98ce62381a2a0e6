"""Boundary flux and angular derivatives of sampled harmonic functions."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from ..geometry import GeometryError, StarDomain


def normal_flux(field: Callable, piece, spacing: float = 2e-3, offset: Optional[float] = None,
                h: Optional[float] = None, boundary_value=None) -> float:
    """``(1/2pi) * integral of the inward normal derivative over a boundary piece``.

    The derivative uses the second-order one-sided difference
    ``(4 f(o) - f(2o) - 3 f(0)) / (2o)`` along the inward normal and the
    integral is a composite trapezoid rule in arc length.  Samples whose
    offset points leave the domain (cusps at the unit circle) contribute zero.
    """
    if h is None:
        h = field.h if hasattr(field, "local_spacing") else 0.0
    if offset is None:
        offset = 3.0 * h
    length = _piece_length(piece)
    n = max(33, int(math.ceil(length / spacing)) + 1)
    pts, nrm, w = piece.parametrize(n)
    if callable(offset):
        offset = np.asarray(offset(pts), dtype=float)
    if np.any(offset < 2.0 * h) or np.any(offset <= 0):
        raise ValueError(f"offset too small for grid spacing {h}")
    if boundary_value is None:
        f0 = field.on_boundary(pts) if hasattr(field, "on_boundary") else np.zeros(n)
    else:
        f0 = np.broadcast_to(np.asarray(boundary_value, dtype=float), (n,))
    f1 = np.asarray(field(pts + offset * nrm), dtype=float)
    f2 = np.asarray(field(pts + 2 * offset * nrm), dtype=float)
    deriv = (4 * f1 - f2 - 3 * f0) / (2 * offset)
    deriv = np.where(np.isfinite(deriv), deriv, 0.0)
    return float(np.sum(w * deriv) / (2 * math.pi))


def _piece_length(piece) -> float:
    pts, _, w = piece.parametrize(257)
    return float(np.sum(w))


def angular_derivative(field: Callable, z, dt: float = 1e-2, domain: Optional[StarDomain] = None,
                       h=0.0):
    """Central difference of ``field(rho e^{it})`` in ``t``.

    With a ``domain``, every probe must lie at least ``2h`` inside it; ``h``
    may be an array of local grid spacings, one per point.
    """
    z = np.asarray(z, dtype=complex)
    zp = z * np.exp(1j * dt)
    zm = z * np.exp(-1j * dt)
    h = np.asarray(h, dtype=float)
    if domain is not None and np.any(h > 0):
        for w in (z, zp, zm):
            if not np.all(domain.contains(w)):
                raise GeometryError("angular derivative probe outside the domain")
            d, _ = domain.distance_to_boundary(np.atleast_1d(w))
            if np.any(d < 2 * h):
                raise GeometryError("angular derivative probe within 2h of the boundary")
    return (np.asarray(field(zp)) - np.asarray(field(zm))) / (2 * dt)

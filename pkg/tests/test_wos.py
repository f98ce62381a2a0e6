import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from vellingcheck import _kernels
from vellingcheck.geometry import GeometryError, arc_disk, lens_domain, unit_disk
from vellingcheck.solver.wos import _Moments, run_walks, wos_green, wos_harmonic_measure


def test_disk_arc_oracle():
    est = wos_harmonic_measure(arc_disk(math.pi / 4), 0j, 0, eps=1e-4, n=200_000, seed=3)
    assert est.samples == 200_000
    assert abs(est.value - 0.25) <= 3 * est.std_error + est.bias_bound


def test_off_centre_start_matches_poisson_kernel():
    # omega(z, arc of half opening a about 1, disk) from the Poisson kernel integral
    a, z = math.pi / 3, 0.3 + 0.2j
    t = np.linspace(-a, a, 20001)
    pk = (1 - abs(z) ** 2) / np.abs(np.exp(1j * t) - z) ** 2
    exact = trapezoid(pk, t) / (2 * math.pi)
    est = wos_harmonic_measure(arc_disk(a), z, 0, eps=1e-4, n=200_000, seed=5)
    assert abs(est.value - exact) <= 3 * est.std_error + est.bias_bound


def test_green_disk():
    est = wos_green(unit_disk(), 0.5, 0j, eps=1e-4, n=100_000, seed=1)
    assert abs(est.value - math.log(2)) <= 3 * est.std_error + est.bias_bound


def test_lens_closed_form():
    a = math.pi / 4
    est = wos_harmonic_measure(lens_domain(a), 0j, 0, eps=1e-4, n=100_000, seed=9)
    assert abs(est.value - 2 * a / math.pi) <= 3 * est.std_error + est.bias_bound


def test_workers_do_not_change_result():
    d = arc_disk(math.pi / 4)
    score = lambda labels, _pts: (labels == 0).astype(float)  # noqa: E731
    m1, _ = run_walks(d, 0j, 1e-4, 20_000, 11, score, workers=1, batch=3000)
    m4, _ = run_walks(d, 0j, 1e-4, 20_000, 11, score, workers=4, batch=3000)
    assert (m1.count, m1.mean, m1.m2) == (m4.count, m4.mean, m4.m2)


def test_batching_changes_only_rounding():
    d = arc_disk(math.pi / 4)
    a = wos_harmonic_measure(d, 0j, 0, n=30_000, seed=2)
    score = lambda labels, _pts: (labels == 0).astype(float)  # noqa: E731
    m, _ = run_walks(d, 0j, 1e-4, 30_000, 2, score, batch=777)
    assert m.mean == pytest.approx(a.value, abs=1e-12)


def test_seeds_differ():
    d = arc_disk(math.pi / 4)
    a = wos_harmonic_measure(d, 0j, 0, n=20_000, seed=0)
    b = wos_harmonic_measure(d, 0j, 0, n=20_000, seed=1)
    assert a.value != b.value


def test_uniform_stream():
    u = _kernels.uniform_stream(np.uint64(7), 42, 100_000)
    assert np.all((u >= 0) & (u < 1))
    assert abs(u.mean() - 0.5) < 5e-3
    assert np.array_equal(u, _kernels.uniform_stream(np.uint64(7), 42, 100_000))
    assert not np.array_equal(u[:10], _kernels.uniform_stream(np.uint64(7), 43, 10))


def test_moment_merge_matches_direct(rng):
    x = rng.normal(size=1001)
    m = _Moments.of(x[:300]).merge(_Moments.of(x[300:])).merge(_Moments.of(x[:0]))
    assert m.count == 1001
    assert m.mean == pytest.approx(x.mean(), rel=1e-13)
    assert m.m2 == pytest.approx(np.sum((x - x.mean()) ** 2), rel=1e-12)


def test_errors():
    d = unit_disk()
    with pytest.raises(GeometryError):
        wos_harmonic_measure(d, 1.5 + 0j, 0, n=10)
    with pytest.raises(ValueError):
        wos_harmonic_measure(d, 0.999 + 0j, 0, eps=0.01, n=10)
    with pytest.raises(ValueError):
        wos_harmonic_measure(d, 0j, 0, n=0)
    with pytest.raises(ValueError):
        wos_harmonic_measure(d, 0j, 0, eps=0.0, n=10)
    with pytest.raises(ValueError):
        wos_green(d, 0.5, 0.5, n=10)
    with pytest.raises(GeometryError):
        wos_green(d, 2.0, 0j, n=10)

import math

import numpy as np
import pytest

from vellingcheck import velling as V
from vellingcheck.geometry import PolarArc, make_partition, reflect_across_ray

OPTS = V.SolverOptions(n=100_000, angles=256)


@pytest.fixture(scope="module")
def inst():
    return V.build_instance(make_partition([1.2, 0.7, 0.7, math.pi - 2.6]), angles=256)


@pytest.fixture(scope="module")
def inst_equal():
    return V.build_instance(make_partition([math.pi / 4] * 4), angles=256)


def interior_points(d, n=4000, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    return z[d.contains(z) & (np.abs(z) > 1e-3)]


def test_omega0():
    # openings are half arc lengths; omega0 is the longest arc's share of the circle
    p = make_partition([1.0, 1.0, math.pi - 2.0])
    assert V.omega0(p) == pytest.approx((math.pi - 2.0) / math.pi)


def test_phi_mirror_exact(inst):
    z = interior_points(inst.Dcirc)
    checked = 0
    for g in inst.partition.ray_angles:
        m = reflect_across_ray(z, g)
        ok = inst.Dcirc.contains(m) & (np.abs(np.angle(z * np.exp(-1j * g))) < 0.3)
        assert np.max(np.abs(V.phi_at(inst, z[ok]) - V.phi_at(inst, m[ok])), initial=0) <= 1e-12
        checked += ok.sum()
    assert checked > 50


def test_phi_equals_phi0_on_sector(inst):
    z = interior_points(inst.Dcirc)
    z = z[np.abs(np.angle(z)) < inst.partition.alpha0]
    z = z[inst.partition.sector_of(z) == 0]
    assert np.array_equal(V.phi_at(inst, z), V.phi0_at(inst, z))


def test_piecewise_matches_max_form(inst):
    z = interior_points(inst.Dcirc)
    a, b = V.phi_at(inst, z), V.phi_max_form(inst, z)
    ok = np.isfinite(b)
    assert ok.sum() > 50
    assert np.max(np.abs(a[ok] - b[ok])) <= 1e-12


def test_phi_continuous_across_rays(inst):
    for g in inst.partition.ray_angles:
        z = 0.3 * np.exp(1j * g)
        if not inst.Dcirc.contains(z):
            continue
        up, dn = V.phi_at(inst, z * np.exp(1e-7j)), V.phi_at(inst, z * np.exp(-1e-7j))
        assert abs(up - dn) < 1e-4


def test_phi_singularity_and_domain(inst):
    with pytest.raises(ValueError):
        V.phi_at(inst, np.array([0j]))
    with pytest.raises(ValueError):
        V.phi_at(inst, np.array([0.999 + 0j]))
    with pytest.raises(ValueError):
        V.phi0_at(inst, np.array([0.2 * np.exp(3j)]))


def test_theorem_strict(inst):
    rep = V.check_theorem(inst, OPTS)
    assert rep.passed
    assert rep.margin > 3 * rep.std_error


def test_shared_estimates(inst):
    a = V.check_theorem(inst, OPTS, instance_id=7)
    b = V.check_conjecture(inst, OPTS, instance_id=7)
    assert b.quantities["basic"][0] == a.value
    assert b.passed


def test_conjecture_needs_geodesic():
    p = make_partition([1.2, 0.7, 0.7, math.pi - 2.6])
    inst = V.build_instance(p, PolarArc.power(p.alpha0, 0.5), angles=128)
    with pytest.raises(ValueError):
        V.check_conjecture(inst, OPTS)


def test_lemma(inst):
    rep = V.check_lemma(inst, OPTS)
    assert rep.passed, rep.quantities
    assert rep.quantities["probes"][0] >= 100


def test_flux(inst):
    rep = V.check_flux(inst, OPTS)
    assert rep.passed, rep.quantities


def test_regularity(inst):
    rep = V.check_phi_regularity(inst, OPTS)
    assert rep.passed, rep.quantities
    assert rep.quantities["mirror_error"][0] <= 1e-12


def test_regularity_rejects_wrong_branch(inst, monkeypatch):
    # shrinking one sector's argument by 3% breaks continuity across its rays
    good = V._branch_arg

    def wrong(inst, z):
        k = inst.partition.sector_of(np.asarray(z, dtype=complex))
        return good(inst, z) * np.where(k == 1, 0.97, 1.0)

    monkeypatch.setattr(V, "_branch_arg", wrong)
    rep = V.check_phi_regularity(inst, OPTS)
    assert not rep.passed
    assert rep.quantities["value"][0] > 4


def test_comparison(inst):
    rep = V.check_u(inst, OPTS)
    assert rep.passed, rep.quantities


def test_equal_arcs_equality(inst_equal):
    rep = V.check_u(inst_equal, OPTS)
    assert rep.passed and rep.quantities["max_abs_u"][0] <= 1e-2
    c = V.check_conjecture(inst_equal, OPTS)
    assert c.passed
    assert abs(c.quantities["image_length"][0] - c.quantities["arc_length"][0]) <= 0.02 * c.quantities["arc_length"][0]


def test_corollary_square():
    rep = V.check_corollary(make_partition([math.pi / 4] * 4), OPTS)
    assert rep.passed
    assert abs(rep.value - 0.25) <= 3 * rep.std_error + OPTS.fd_tol


def test_domain_extension():
    rep = V.check_domain_extension(make_partition([1.2, 0.7, 0.7, math.pi - 2.6]), 2, OPTS)
    assert rep.passed
    with pytest.raises(ValueError):
        V.check_domain_extension(make_partition([1.2, 0.7, 0.7, math.pi - 2.6]), 0, OPTS)


def test_probe_margin_capped(inst):
    m = V.probe_margin(inst.Omega, upper=True)
    assert 0 < m <= 0.05
    assert m <= 0.5 * V.inradius(inst.Omega, upper=True) + 1e-15

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vellingcheck import geometry as G


def test_partition_is_reordered_longest_first():
    p = G.make_partition([0.7, 1.2, 0.7, math.pi - 2.6])
    assert p.openings[0] == pytest.approx(1.2)
    assert p.alpha0 == pytest.approx(1.2)
    assert p.centers[0] == 0.0
    # arcs tile the circle counter-clockwise
    for k in range(len(p.arcs)):
        a, b = p.arcs[k], p.arcs[(k + 1) % len(p.arcs)]
        end = a.center + a.half_opening
        assert float(G.wrap_angle(end - (b.center - b.half_opening))) == pytest.approx(0.0, abs=1e-12)


def test_partition_ties_pick_lowest_index():
    p = G.make_partition([1.0, 0.5, 1.0, math.pi - 2.5])
    assert p.openings == pytest.approx((1.0, 0.5, 1.0, math.pi - 2.5))


@pytest.mark.parametrize("ops", [[1.0, 1.0], [1.0, 1.0, 1.0], [math.pi / 2, 1.0, math.pi / 2 - 1.0],
                                 [-0.1, 1.6, 1.6415926535897932]])
def test_partition_rejects_bad_openings(ops):
    with pytest.raises(G.GeometryError):
        G.make_partition(ops)


def test_deviations():
    p = G.make_partition([1.2, 0.7, 0.7, math.pi - 2.6])
    assert p.deviations[0] == 0.0
    assert p.deviations[1] == pytest.approx(0.5)
    assert abs(p.eta(1)) == pytest.approx(1.0)


def test_geodesic_closed_forms():
    a = math.pi / 3
    g = G.geodesic_of(G.UnitArc(0.0, a))
    assert g.min_radius == pytest.approx(2 - math.sqrt(3))
    assert g.circle_radius == pytest.approx(math.tan(a))
    assert abs(g.circle_center) == pytest.approx(1 / math.cos(a))
    # orthogonal to the unit circle: |c|^2 = 1 + r^2
    assert abs(g.circle_center) ** 2 == pytest.approx(1 + g.circle_radius ** 2)
    # endpoints on the unit circle
    assert float(g.radius_at(a)) == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(G.GeometryError):
        G.geodesic_radius_at(g, a + 0.1)


def test_sector_of_assigns_shared_rays_to_lower_index(unequal4):
    p = unequal4
    z = np.exp(1j * np.array(p.ray_angles[:-1]))
    assert list(p.sector_of(0.5 * z)) == list(range(len(p.arcs) - 1))


def test_domain_nesting(unequal4):
    """basic domain inside the Velling domain inside the polygon."""
    p = unequal4
    D = G.velling_domain(p)
    Dc = G.basic_domain(p, G.PolarArc.geodesic(p.alpha0))
    P = G.polygon_domain(p)
    t = np.linspace(-math.pi, math.pi, 4001)
    assert np.all(Dc.radius_at(t) <= D.radius_at(t) + 1e-12)
    assert np.all(D.radius_at(t) <= P.radius_at(t) + 1e-12)
    # the basic arc agrees with the geodesic over the longest arc
    t0 = np.linspace(-p.alpha0, p.alpha0, 101)
    assert np.allclose(Dc.radius_at(t0), D.radius_at(t0), atol=1e-12)


def test_basic_domain_equal_arcs_is_velling(equal4):
    D = G.velling_domain(equal4)
    Dc = G.basic_domain(equal4, G.PolarArc.geodesic(equal4.alpha0))
    t = np.linspace(-math.pi, math.pi, 1001)
    assert np.allclose(D.radius_at(t), Dc.radius_at(t), atol=1e-12)


def test_basic_arc_power_kind_matches_polar_graph(unequal4):
    p = unequal4
    basic = G.PolarArc.power(p.alpha0, 0.3, 2.0)
    basic.validate()
    Dc = G.basic_domain(p, basic)
    assert Dc.radius_at(np.array([0.0]))[0] == pytest.approx(0.3)


def test_omega_domain_radius(unequal4):
    p = unequal4
    basic = G.PolarArc.geodesic(p.alpha0)
    w0 = p.alpha0 / math.pi
    O = G.omega_domain(basic, w0)
    s = np.linspace(-3.0, 3.0, 13)
    assert np.allclose(O.radius_at(s), basic(s * w0) ** (1 / w0))
    with pytest.raises(G.GeometryError):
        G.omega_domain(basic, 0.3)


def test_distance_queries_match_brute_force(unequal4, rng):
    p = unequal4
    for d in (G.velling_domain(p), G.polygon_domain(p), G.basic_domain(p, G.PolarArc.power(p.alpha0, 0.3, 2.0))):
        z = rng.uniform(-1, 1, 400) + 1j * rng.uniform(-1, 1, 400)
        z = z[d.contains(z)]
        dist, _ = d.distance_to_boundary(z)
        bnd = d.boundary_point(np.linspace(-math.pi, math.pi, 200001))
        brute = np.min(np.abs(z[:, None] - bnd[None, :]), axis=1)
        # lower bound, tight to the polyline tolerance
        assert np.all(dist <= brute + 1e-9)
        assert np.all(dist >= brute - 1e-4)


def test_distance_rejects_exterior_points(unequal4):
    with pytest.raises(G.GeometryError):
        G.velling_domain(unequal4).distance_to_boundary(np.array([0.99]))


def test_power_map_round_trip():
    z = np.array([0.3 + 0.1j, 0.5 * np.exp(0.9j), 0.2 * np.exp(-1.1j)])
    w0 = 0.4
    w = G.power_map(z, w0)
    assert np.allclose(G.power_map(w, w0, inverse=True), z)
    assert G.power_map(np.array([1.0]), w0)[0] == pytest.approx(1.0)


def test_reflection_across_ray():
    z = np.array([0.5 * np.exp(0.3j)])
    r = G.reflect_across_ray(z, 0.5)
    assert np.angle(r)[0] == pytest.approx(0.7)
    assert np.allclose(G.reflect_across_ray(r, 0.5), z)


def test_partition_json_round_trip(unequal4):
    q = G.partition_from_dict(unequal4.to_dict())
    assert q.openings == pytest.approx(unequal4.openings)
    b = G.PolarArc.power(1.2, 0.3, 2.0)
    assert G.polar_arc_from_dict(b.to_dict()).to_dict() == b.to_dict()


@st.composite
def openings(draw):
    n = draw(st.integers(3, 8))
    w = draw(st.lists(st.floats(0.2, 1.0), min_size=n, max_size=n))
    ops = np.array(w) * math.pi / sum(w)
    if ops.max() >= G.OPENING_CAP:
        ops = np.full(n, math.pi / n)
    return ops.tolist()


@settings(max_examples=40, deadline=None)
@given(openings())
def test_partition_properties(ops):
    p = G.make_partition(ops)
    assert math.fsum(p.openings) == pytest.approx(math.pi, abs=1e-12)
    assert max(p.openings) == p.openings[0]
    assert all(d >= 0 for d in p.deviations)
    D = G.velling_domain(p)
    Dc = G.basic_domain(p, G.PolarArc.geodesic(p.alpha0))
    t = np.linspace(-math.pi, math.pi, 721)
    rD, rC = D.radius_at(t), Dc.radius_at(t)
    # at the cusps on the unit circle r(t) ~ 1 - c sqrt|t - t0|, so angle round-off shows up as ~1e-8
    assert np.all(rC <= rD + 1e-7)
    assert np.all((rC > 0) & (rD <= 1 + 1e-12))

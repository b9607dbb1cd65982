import math

import numpy as np
import pytest

from rittlab import stolz
from rittlab.errors import OutOfRange
from rittlab.stolz import LegacyStolzRegion, StolzDomain


def test_domain_validation():
    with pytest.raises(ValueError):
        StolzDomain(1.0)
    assert StolzDomain(2.0).half_angle == pytest.approx(math.acos(0.5))


def test_contains_center():
    assert stolz.contains(StolzDomain(2.0), 0.0)


def test_contains_negative_half():
    # quotient 1.5 / 0.5 = 3 > 2
    assert not stolz.contains(StolzDomain(2.0), -0.5)


def test_boundary_point_not_contained():
    # gamma(0) for theta=2 is (1-2)/(1+2) = -1/3 with quotient exactly 2;
    # the strict predicate has no tolerance, so test one ulp to each side
    # of the knife edge rather than the tie itself
    z = -1.0 / 3.0
    assert stolz.membership_quotient(z) == pytest.approx(2.0, abs=1e-14)
    assert not stolz.contains(StolzDomain(2.0 - 1e-12), z)
    assert stolz.contains(StolzDomain(2.0 + 1e-9), z)


def test_vertex_not_contained():
    assert not stolz.contains(StolzDomain(5.0), 1.0)


def test_boundary_values():
    c = stolz.make_contour(2.0, 1e-8)
    z0, _ = stolz.boundary(c, 0.0)
    assert z0 == pytest.approx(-1.0 / 3.0)
    z1, _ = stolz.boundary(c, c.c_theta)
    assert z1 == pytest.approx(1.0, abs=1e-14)
    za, _ = stolz.boundary(c, 0.3)
    zb, _ = stolz.boundary(c, -0.3)
    assert za == pytest.approx(np.conj(zb))


def test_boundary_out_of_range():
    c = stolz.make_contour(2.0, 1e-8)
    with pytest.raises(OutOfRange):
        stolz.boundary(c, c.c_theta + 0.1)


@pytest.mark.parametrize("theta", [1.3, 2.0, 3.0])
def test_contour_node_identities(theta):
    c = stolz.make_contour(theta, 1e-8)
    r = stolz.radial_profile(theta, c.nodes)
    # |gamma| = 1 - r/theta at every node
    assert np.max(np.abs(np.abs(c.points) - (1.0 - r / theta))) < 1e-12
    # |gamma'| = 2 theta / sqrt(theta^2-1) |gamma|^(1/2)
    pred = 2.0 * theta / math.sqrt(theta * theta - 1.0) * np.sqrt(np.abs(c.points))
    assert np.max(np.abs(np.abs(c.derivs) - pred)) < 1e-10
    # strictly inside the closed disc, vertex approached only at the ends
    assert np.all(np.abs(c.points) < 1.0)
    # the membership quotient equals theta along the curve
    quot = np.abs(1.0 - c.points) / (1.0 - np.abs(c.points))
    assert np.max(np.abs(quot - theta)) < 1e-8


def test_cauchy_probes():
    c = stolz.make_contour(2.0, 1e-10)
    for z0 in (0.0, -0.2, 0.3 + 0.1j):
        assert abs(stolz.cauchy_probe(c, z0) - 2j * math.pi) <= 1e-10
    assert abs(stolz.cauchy_probe(c, 2.0)) <= 1e-10  # holomorphic outside
    assert abs(np.sum(c.weights * c.derivs)) <= 1e-10  # closed curve


def test_arc_length_against_midpoint_oracle():
    # brute-force midpoint rule with 1e6 points as the independent oracle
    theta = 3.0
    c = stolz.make_contour(theta, 1e-10)
    n = 1_000_000
    C = stolz.c_theta(theta)
    ts = (np.arange(n) + 0.5) / n * (2 * C) - C
    _, dz = stolz.boundary_point(theta, ts)
    oracle = np.sum(np.abs(dz)) * (2 * C / n)
    assert stolz.arc_length(c) == pytest.approx(oracle, abs=1e-8)


def test_monotone_nesting():
    small, big = StolzDomain(1.5), StolzDomain(2.5)
    c = stolz.make_contour(1.2, 1e-8)
    for z in c.points[::7]:
        if stolz.contains(small, z):
            assert stolz.contains(big, z)


def test_reflection_symmetry():
    c = stolz.make_contour(2.0, 1e-8)
    assert np.allclose(np.sort(c.nodes), np.sort(-c.nodes), atol=1e-15)


def test_contour_nodes_inside_legacy_region():
    # for fixed theta there exists r with every node inside the hull region
    c = stolz.make_contour(2.0, 1e-8)
    found = False
    for r in np.linspace(0.35, 0.99, 60):
        region = LegacyStolzRegion(r)
        if all(region.contains(z) for z in c.points):
            found = True
            break
    assert found


def test_legacy_region_membership():
    region = LegacyStolzRegion(0.5)
    assert region.contains(0.4)            # inside the ball
    assert region.contains(0.9)            # on the cone axis
    assert region.contains(1.0)            # the vertex belongs to the hull
    assert not region.contains(0.5 + 0.5j)  # above the tangent line
    assert not region.contains(-0.9)       # outside the ball, behind the cone
    # cone edge oracle: the segment from 1 to the tangent point
    assert region.contains(0.7 + 0.15j)


def test_make_contour_bad_args():
    with pytest.raises(ValueError):
        stolz.make_contour(1.0, 1e-8)
    with pytest.raises(ValueError):
        stolz.make_contour(2.0, -1.0)


def test_contour_csv(tmp_path):
    c = stolz.make_contour(2.0, 1e-8)
    path = tmp_path / "contour.csv"
    stolz.contour_to_csv(c, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,re_z,im_z,re_dz,im_dz,weight"
    assert len(lines) == c.node_count + 1

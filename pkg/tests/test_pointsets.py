import numpy as np
import pytest

from hermitegf.errors import DimensionTooLarge, OutOfDomain, RejectionStalled
from hermitegf.pointsets import (
    box_scale,
    cluster_boundary,
    disk_exit,
    halton,
    halton_box,
    hyperbola_map,
    hyperbolic_nodes,
    in_hyperbolic_domain,
)


def test_halton_radical_inverse():
    P = halton(3, 2)
    np.testing.assert_allclose(P[:, 0], [0.5, 0.25, 0.75])
    np.testing.assert_allclose(P[:2, 1], [1 / 3, 2 / 3])
    np.testing.assert_allclose(halton(2, 1, skip=1)[:, 0], [0.25, 0.75])


def test_halton_properties():
    P = halton(10_000, 3)
    assert np.all((P > 0) & (P < 1))
    assert len(np.unique(P, axis=0)) == 10_000
    assert halton(5, 8).shape == (5, 8)
    with pytest.raises(DimensionTooLarge):
        halton(5, 9)


def test_box_scale():
    assert box_scale([[0.5]], -1, 1)[0, 0] == 0.0
    np.testing.assert_array_equal(box_scale([[0.0, 1.0]], [-2, 3], [2, 5]), [[-2.0, 5.0]])
    with pytest.raises(ValueError):
        box_scale([[0.5]], 1, 1)


def test_cluster_boundary():
    np.testing.assert_array_equal(cluster_boundary([0.0, 1.0, -1.0]), [0.0, 1.0, -1.0])
    assert cluster_boundary([0.5])[0] == pytest.approx(np.sqrt(2) / 2)
    u = cluster_boundary(np.linspace(-1, 1, 41))
    gaps = np.diff(u)
    assert gaps[0] < gaps[20] and gaps[-1] < gaps[20]
    with pytest.raises(OutOfDomain):
        cluster_boundary([1.2])


def test_halton_box():
    P = halton_box(50, 2, lo=-1, hi=1, clustered=True)
    assert np.all(np.abs(P) <= 1)
    Q = halton_box(50, 2, lo=0, hi=2)
    assert np.all((Q > 0) & (Q < 2))


def test_hyperbola_map():
    x, y = hyperbola_map(1.0, 0.0)
    assert (x, y) == pytest.approx((-0.2, 0.0))
    assert in_hyperbolic_domain([[x, y]])[0]
    c, s = np.array([0.2, 0.5, 0.9]), np.array([0.3, -1.0, 1.1])
    P = hyperbola_map(c, s)
    np.testing.assert_allclose((P[:, 0] + 1.2) ** 2 - 4 * P[:, 1] ** 2, c ** 2, rtol=1e-14)


def test_disk_exit():
    c = np.linspace(0.2, 1.0, 9)
    P = hyperbola_map(c, disk_exit(c))
    np.testing.assert_allclose((P ** 2).sum(axis=1), 1.0, rtol=1e-13)


@pytest.mark.parametrize("clustered", [True, False])
def test_hyperbolic_nodes_membership(clustered):
    P = hyperbolic_nodes(406, clustered=clustered)
    assert P.shape == (406, 2)
    assert np.all(in_hyperbolic_domain(P, atol=1e-12))
    assert len(np.unique(P, axis=0)) == 406


def test_hyperbolic_nodes_distinct_210():
    assert len(np.unique(hyperbolic_nodes(210), axis=0)) == 210


def test_hyperbolic_grid():
    Z = hyperbolic_nodes(53 ** 2, clustered=False, grid_based=True)
    assert Z.shape == (2809, 2)
    assert np.all(in_hyperbolic_domain(Z, atol=1e-12))
    Zc = hyperbolic_nodes(400, clustered=False, grid_based=True, t_lim=1.5)
    assert 0 < len(Zc) <= 400


def test_fixed_parameter_range():
    P = hyperbolic_nodes(100, t_lim=1.5)
    assert P.shape == (100, 2) and np.all(in_hyperbolic_domain(P, atol=1e-12))
    with pytest.raises(RejectionStalled):
        hyperbolic_nodes(2000, clustered=False, t_lim=300.0)
    with pytest.raises(ValueError):
        hyperbolic_nodes(0)


def test_domain_predicate():
    assert not in_hyperbolic_domain([[0.9, 0.9]])[0]
    assert not in_hyperbolic_domain([[-1.0, 0.5]])[0]
    assert in_hyperbolic_domain([[-0.7, 0.0]])[0]

import numpy as np
import pytest

from h2consensus import (
    Mode,
    NoiseModel,
    ScaleWeightPair,
    build_graph,
    cut_basis,
    edge_system,
    h2_report,
    incidence,
    scaled_edge_laplacian,
    similarity_transform,
    spanning_tree,
    weighted_laplacian,
)
from h2consensus.errors import DimensionMismatch, ValidationError
from h2consensus.graph import IncidenceDecomposition
from h2consensus.h2 import h2_norm_squared
from h2consensus.operators import scaled_laplacian
from h2consensus.randomgraphs import random_network


def test_weighted_laplacian_path(path2):
    r = path2.realize()
    np.testing.assert_array_equal(weighted_laplacian(r.inc, r.sw), [[1, -1], [-1, 1]])


def test_weighted_laplacian_triangle(triangle):
    r = triangle.realize()
    np.testing.assert_array_equal(weighted_laplacian(r.inc, r.sw), 3 * np.eye(3) - np.ones((3, 3)))


def test_weighted_laplacian_dimension_mismatch(triangle):
    r = triangle.realize()
    with pytest.raises(DimensionMismatch):
        weighted_laplacian(r.inc, ScaleWeightPair(np.ones(3), np.ones(2)))


@pytest.mark.parametrize("eps, expected", [((1, 1), 2.0), ((0.5, 0.25), 6.0)])
def test_scaled_edge_laplacian_path(eps, expected):
    g = build_graph(2, [(1, 2)])
    inc = incidence(g, spanning_tree(g))
    L = scaled_edge_laplacian(inc, ScaleWeightPair(np.array(eps, float), np.ones(1)))
    np.testing.assert_allclose(L, [[expected]])


def test_scaled_edge_laplacian_six_tree(six_tree):
    r = six_tree.with_epsilon(np.ones(6)).realize()
    L = scaled_edge_laplacian(r.inc, r.sw)
    # diagonal entry of edge (i, j) is 1/eps_i + 1/eps_j
    np.testing.assert_allclose(np.diag(L), 2.0)
    assert np.trace(L) == pytest.approx(10.0)
    assert np.all(np.linalg.eigvalsh(L) > 0)


def test_scaled_edge_laplacian_diagonal_general(six_tree):
    r = six_tree.realize()
    L = scaled_edge_laplacian(r.inc, r.sw)
    eps = r.sw.epsilon
    expected = [1 / eps[i - 1] + 1 / eps[j - 1] for i, j in r.ordering.tree_edges]
    np.testing.assert_allclose(np.diag(L), expected)


def test_similarity_path(path2):
    r = path2.realize()
    sim = similarity_transform(r.inc, r.cb, r.sw)
    out = sim.S_v_inv @ scaled_laplacian(r.inc, r.sw) @ sim.S_v
    np.testing.assert_allclose(out, [[2, 0], [0, 0]], atol=1e-12)
    np.testing.assert_allclose(sim.S_v @ sim.S_v_inv, np.eye(2), atol=1e-12)


def test_similarity_inverse_rows(triangle):
    r = triangle.with_epsilon([0.5, 1.0, 2.0]).realize()
    sim = similarity_transform(r.inc, r.cb, r.sw)
    np.testing.assert_array_equal(sim.S_v_inv[:-1], r.inc.D_tau.T)
    np.testing.assert_allclose(sim.S_v_inv[-1], np.array([0.5, 1.0, 2.0]) / 3.5)


def test_similarity_random_suite():
    rng = np.random.default_rng(1)
    for _ in range(200):
        net = random_network(int(rng.integers(2, 13)), rng)
        r = net.realize()
        n = net.graph.n
        A = edge_system(r.inc, r.cb, r.sw, r.noise).A
        sim = similarity_transform(r.inc, r.cb, r.sw)
        target = np.zeros((n, n))
        target[:-1, :-1] = A
        out = sim.S_v_inv @ scaled_laplacian(r.inc, r.sw) @ sim.S_v
        assert np.max(np.abs(out - target)) < 1e-7
        assert np.max(np.abs(sim.S_v @ sim.S_v_inv - np.eye(n))) < 1e-8
        ev_node = np.sort(np.linalg.eigvals(scaled_laplacian(r.inc, r.sw)).real)
        ev_edge = np.sort(np.append(np.linalg.eigvals(A).real, 0.0))
        np.testing.assert_allclose(ev_node, ev_edge, atol=1e-7)
        assert np.min(np.linalg.eigvals(A).real) > 0


def test_edge_system_path(path2):
    r = path2.realize()
    sys = edge_system(r.inc, r.cb, r.sw, NoiseModel(), Mode.SIGMA_HAT)
    np.testing.assert_allclose(sys.A, [[2.0]])
    np.testing.assert_allclose(sys.B, [[1.0, -1.0, -2.0]])
    np.testing.assert_allclose(sys.C, [[1.0]])


def test_edge_system_tree_modes_agree(six_tree):
    r = six_tree.realize()
    a = edge_system(r.inc, r.cb, r.sw, r.noise, Mode.SIGMA)
    b = edge_system(r.inc, r.cb, r.sw, r.noise, Mode.SIGMA_HAT)
    np.testing.assert_array_equal(a.A, b.A)
    np.testing.assert_array_equal(a.B, b.B)
    np.testing.assert_array_equal(a.C, b.C)


def test_edge_system_triangle(triangle):
    r = triangle.realize()
    sys = edge_system(r.inc, r.cb, r.sw, r.noise, Mode.SIGMA)
    # L_es = [[2,1],[1,2]], R W R^T = [[2,-1],[-1,2]]  ->  A = 3 I
    np.testing.assert_allclose(sys.A, 3 * np.eye(2), atol=1e-12)
    assert sys.C.shape == (3, 2)


def test_rejects_nonpositive_parameters():
    with pytest.raises(ValidationError):
        ScaleWeightPair(np.ones(3), np.array([1.0, 0.0, 1.0]))
    with pytest.raises(ValidationError):
        ScaleWeightPair(np.array([1.0, -1.0]), np.ones(1))
    with pytest.raises(ValidationError):
        NoiseModel(sigma_omega=0.0)


def test_separable_factors_materialize():
    sw = ScaleWeightPair(np.array([4.0, 9.0]), np.array([16.0]))
    noise = NoiseModel(2.0, 3.0)
    np.testing.assert_allclose(noise.omega(sw), np.diag([4.0, 6.0]))
    np.testing.assert_allclose(noise.gamma(sw), [[12.0]])
    assert noise.separable


def test_explicit_factor_dimension_checked():
    sw = ScaleWeightPair(np.ones(3), np.ones(2))
    with pytest.raises(DimensionMismatch):
        NoiseModel(omega_factor=np.eye(2)).omega(sw)


def _flip(inc: IncidenceDecomposition, col: int) -> IncidenceDecomposition:
    D = inc.D.copy()
    D[:, col] *= -1
    t = inc.ordering.tree_count
    return IncidenceDecomposition(D=D, D_tau=D[:, :t], D_c=D[:, t:], ordering=inc.ordering)


def test_orientation_invariance():
    rng = np.random.default_rng(5)
    for _ in range(30):
        net = random_network(8, rng, p=0.3)
        r = net.realize()
        base = edge_system(r.inc, r.cb, r.sw, r.noise, Mode.SIGMA)
        col = int(rng.integers(net.graph.m))
        inc = _flip(r.inc, col)
        cb = cut_basis(inc)
        flipped = edge_system(inc, cb, r.sw, r.noise, Mode.SIGMA)
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvals(flipped.A).real), np.sort(np.linalg.eigvals(base.A).real), atol=1e-9
        )
        assert h2_norm_squared(flipped) == pytest.approx(h2_norm_squared(base), abs=1e-9)
        a, b = h2_report(r.inc, r.cb, r.sw).as_dict(), h2_report(inc, cb, r.sw).as_dict()
        for key in a:
            assert a[key] == pytest.approx(b[key], abs=1e-9)


def test_cycle_states_are_tree_combinations():
    rng = np.random.default_rng(9)
    for _ in range(50):
        net = random_network(9, rng, p=0.3)
        r = net.realize()
        x = rng.standard_normal(net.graph.n)
        x_tau, x_c = r.inc.D_tau.T @ x, r.inc.D_c.T @ x
        np.testing.assert_allclose(x_c, r.cb.T_tau_c.T @ x_tau, atol=1e-8)

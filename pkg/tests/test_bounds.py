import numpy as np
import pytest

from h2consensus import (
    EdgeSystem,
    Mode,
    NoiseModel,
    covariance_h2_bounds,
    edge_system,
    gramian_trace_bounds,
    observability_gramian,
    rayleigh_product_bounds,
)
from h2consensus.bounds import weyl_terms
from h2consensus.errors import RankDeficientZ, UnstableA
from h2consensus.h2 import h2_norm_squared
from h2consensus.randomgraphs import random_network, random_pd_factor


def test_observability_scalar():
    P = observability_gramian(EdgeSystem(A=np.array([[2.0]]), B=np.ones((1, 1)), C=np.array([[1.0]])))
    np.testing.assert_allclose(P, [[0.25]])


def test_observability_identity():
    P = observability_gramian(EdgeSystem(A=np.eye(3), B=np.eye(3), C=np.eye(3)))
    np.testing.assert_allclose(P, np.eye(3) / 2)


def test_observability_random(rng):
    for _ in range(20):
        net = random_network(8, rng, p=0.3)
        r = net.realize()
        for mode in Mode:
            sys = edge_system(r.inc, r.cb, r.sw, r.noise, mode)
            P = observability_gramian(sys)
            assert np.max(np.abs(sys.A.T @ P + P @ sys.A - sys.C.T @ sys.C)) < 1e-8
            assert np.linalg.eigvalsh(P)[0] > 0


def test_observability_rejects_unstable():
    with pytest.raises(UnstableA):
        observability_gramian(EdgeSystem(A=-np.eye(2), B=np.eye(2), C=np.eye(2)))


def test_trace_bounds_collapse_on_scalar(path2):
    r = path2.realize()
    rep = gramian_trace_bounds(edge_system(r.inc, r.cb, r.sw, r.noise, Mode.SIGMA_HAT))
    assert rep.components["lambda_min_BBt"] == pytest.approx(6.0)
    assert rep.components["trace_P_O"] == pytest.approx(0.25)
    assert rep.lower == pytest.approx(1.5) and rep.value == pytest.approx(1.5) and rep.upper == pytest.approx(1.5)


def test_trace_bounds_strict():
    # orthogonal input rows with unequal scale: BB^T = diag(1, 4), P = I/2
    sys = EdgeSystem(A=np.eye(2), B=np.diag([1.0, 2.0]), C=np.eye(2))
    rep = gramian_trace_bounds(sys)
    assert (rep.lower, rep.value, rep.upper) == pytest.approx((1.0, 2.5, 4.0))
    assert rep.lower < rep.value < rep.upper


def test_trace_bounds_equal_h2(rng):
    for _ in range(20):
        net = random_network(7, rng, p=0.3)
        r = net.realize()
        sys = edge_system(r.inc, r.cb, r.sw, r.noise, Mode.SIGMA)
        rep = gramian_trace_bounds(sys)
        assert rep.value == pytest.approx(h2_norm_squared(sys), rel=1e-10)
        assert rep.holds


def test_rayleigh_identity_z():
    M = np.array([[2.0, 1.0], [1.0, 3.0]])
    b = rayleigh_product_bounds(M, np.eye(2))
    assert b.lower == pytest.approx(b.lambda_min) and b.upper == pytest.approx(b.lambda_max)


def test_rayleigh_identity_m(rng):
    Z = rng.standard_normal((5, 3))
    b = rayleigh_product_bounds(np.eye(5), Z)
    lam = np.linalg.eigvalsh(Z.T @ Z)
    assert (b.lower, b.upper) == pytest.approx((lam[0], lam[-1]))
    assert (b.lambda_min, b.lambda_max) == pytest.approx((lam[0], lam[-1]))


def test_rayleigh_random(rng):
    for _ in range(500):
        n = int(rng.integers(2, 8))
        k = int(rng.integers(1, n + 1))
        F = rng.standard_normal((n, n))
        M = F @ F.T + 0.1 * np.eye(n)
        Z = rng.standard_normal((n, k))
        b = rayleigh_product_bounds(M, Z)
        assert b.lower - 1e-9 <= b.lambda_min and b.lambda_max <= b.upper + 1e-9


def test_rayleigh_rank_deficient():
    with pytest.raises(RankDeficientZ):
        rayleigh_product_bounds(np.eye(3), np.array([[1.0, 1.0], [1.0, 1.0], [0.0, 0.0]]))


def test_covariance_bounds_path(path2):
    r = path2.realize()
    noise = NoiseModel()
    rep = covariance_h2_bounds(r.inc, r.cb, r.sw, noise.omega(r.sw), noise.gamma(r.sw))
    # tree Gram 2, cycle Gram 4, unit covariances, tr(P_O) = 1/4
    assert rep.components["lambda_min_tree_gram"] == pytest.approx(2.0)
    assert rep.components["lambda_min_cycle_gram"] == pytest.approx(4.0)
    assert (rep.lower, rep.value, rep.upper) == pytest.approx((1.5, 1.5, 1.5))


def test_covariance_bounds_isotropic(rng):
    net = random_network(8, rng, p=0.3)
    r = net.realize()
    n, m = net.graph.n, net.graph.m
    c, d = 0.7, 1.9
    rep = covariance_h2_bounds(r.inc, r.cb, r.sw, c * np.eye(n), d * np.eye(m), Mode.SIGMA)
    comp = rep.components
    expected_lower = (c**2 * comp["lambda_min_tree_gram"] + d**2 * comp["lambda_min_cycle_gram"]) * comp["trace_P_O"]
    assert rep.lower == pytest.approx(expected_lower)
    # with isotropic covariances, B B^T is the Weyl sum of the two Gram terms exactly
    assert comp["lambda_min_BBt"] >= comp["lambda_min_tree_gram"] * c**2 + comp["lambda_min_cycle_gram"] * d**2 - 1e-9
    assert rep.holds


def test_covariance_bounds_random_suite():
    rng = np.random.default_rng(44)
    for _ in range(200):
        net = random_network(int(rng.integers(2, 11)), rng)
        r = net.realize()
        omega = random_pd_factor(net.graph.n, rng)
        gamma = random_pd_factor(net.graph.m, rng)
        for mode in Mode:
            rep = covariance_h2_bounds(r.inc, r.cb, r.sw, omega, gamma, mode)
            assert rep.lower - 1e-9 <= rep.value <= rep.upper + 1e-9
            h2 = h2_norm_squared(edge_system(r.inc, r.cb, r.sw, NoiseModel(omega_factor=omega, gamma_factor=gamma), mode))
            assert rep.value == pytest.approx(h2)
        w = weyl_terms(r.inc, r.cb, r.sw, omega, gamma)
        assert w["min_sum_of_parts"] <= w["min_of_sum"] + 1e-9
        assert w["max_of_sum"] <= w["max_sum_of_parts"] + 1e-9


def test_covariance_bounds_scale_equivariance(rng):
    net = random_network(7, rng, p=0.3)
    r = net.realize()
    omega = random_pd_factor(net.graph.n, rng)
    gamma = random_pd_factor(net.graph.m, rng)
    base = covariance_h2_bounds(r.inc, r.cb, r.sw, omega, gamma)
    scaled = covariance_h2_bounds(r.inc, r.cb, r.sw, 3 * omega, 3 * gamma)
    assert scaled.value == pytest.approx(9 * base.value)
    assert scaled.lower == pytest.approx(9 * base.lower)
    assert scaled.upper == pytest.approx(9 * base.upper)
    assert scaled.components["lambda_max_omega_cov"] == pytest.approx(9 * base.components["lambda_max_omega_cov"])
    assert scaled.holds

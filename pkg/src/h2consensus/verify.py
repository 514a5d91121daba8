"""Invariant battery run by ``h2consensus verify``.

Each check returns its largest observed violation; a check passes when that
value is at most its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import covariance_h2_bounds, gramian_trace_bounds
from .graph import random_spanning_tree
from .h2 import closed_form_gramian, controllability_gramian, cycle_contributions, h2_norm_squared, separated_h2
from .network import Network
from .operators import Mode, NoiseModel, edge_system, scaled_edge_laplacian, scaled_laplacian, similarity_transform
from .randomgraphs import random_network, random_pd_factor


@dataclass
class Check:
    name: str
    tol: float
    worst: float = 0.0
    count: int = 0

    def record(self, violation: float) -> None:
        self.worst = max(self.worst, float(violation))
        self.count += 1

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.worst)) and self.worst <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name:<28} max_violation={self.worst:.3e} tol={self.tol:.0e} n={self.count}"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_violation": self.worst,
            "tolerance": self.tol,
            "instances": self.count,
        }


@dataclass
class Battery:
    checks: dict[str, Check] = field(default_factory=dict)

    def __post_init__(self):
        for name, tol in [
            ("similarity_transform", 1e-7),
            ("spectrum_preservation", 1e-7),
            ("closed_form_gramian", 1e-7),
            ("separated_terms_sum", 1e-8),
            ("hat_relation", 1e-9),
            ("trace_identity", 1e-9),
            ("trace_bound_bracket", 1e-9),
            ("covariance_bound_bracket", 1e-9),
            ("spanning_tree_invariance", 1e-8),
            ("k_ratio_range", 0.0),
        ]:
            self.checks[name] = Check(name, tol)

    def __getitem__(self, name: str) -> Check:
        return self.checks[name]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks.values()]

    def as_list(self) -> list[dict]:
        return [c.as_dict() for c in self.checks.values()]


def check_network(net: Network, battery: Battery, rng: np.random.Generator, trees: int = 3) -> None:
    """Run every invariant on ``net`` and fold the violations into ``battery``."""
    real = net.realize()
    inc, cb, sw = real.inc, real.cb, real.sw
    so, sv = net.noise.sigma_omega, net.noise.sigma_v
    n = net.graph.n

    A = scaled_edge_laplacian(inc, sw) @ (cb.R * sw.weights) @ cb.R.T
    sim = similarity_transform(inc, cb, sw)
    target = np.zeros((n, n))
    target[: n - 1, : n - 1] = A
    transformed = sim.S_v_inv @ scaled_laplacian(inc, sw) @ sim.S_v
    battery["similarity_transform"].record(
        max(np.max(np.abs(transformed - target)), np.max(np.abs(sim.S_v @ sim.S_v_inv - np.eye(n))))
    )

    ev_node = np.sort(np.linalg.eigvals(scaled_laplacian(inc, sw)).real)
    ev_edge = np.sort(np.concatenate([np.linalg.eigvals(A).real, [0.0]]))
    battery["spectrum_preservation"].record(np.max(np.abs(ev_node - ev_edge)))

    sep = NoiseModel(so, sv)
    worst_terms = 0.0
    for mode in (Mode.SIGMA, Mode.SIGMA_HAT):
        sys = edge_system(inc, cb, sw, sep, mode)
        if mode is Mode.SIGMA:
            X_num = controllability_gramian(sys)
            X_cf = closed_form_gramian(inc, cb, sw, so, sv)
            battery["closed_form_gramian"].record(np.max(np.abs(X_num - X_cf)))
        tw, te = separated_h2(inc, cb, sw, so, sv, mode)
        worst_terms = max(worst_terms, abs(tw + te - h2_norm_squared(sys)))
    battery["separated_terms_sum"].record(worst_terms)

    full_w, full_e = separated_h2(inc, cb, sw, so, sv, Mode.SIGMA)
    hat_w, hat_e = separated_h2(inc, cb, sw, so, sv, Mode.SIGMA_HAT)
    cyc_w, cyc_e = cycle_contributions(inc, cb, sw, so, sv)
    battery["hat_relation"].record(
        max(abs(full_w - hat_w - cyc_w), abs(full_e - hat_e - cyc_e), -cyc_w, -cyc_e)
    )

    L_es = scaled_edge_laplacian(inc, sw)
    deg = np.array([len(net.graph.neighbors(i)) for i in net.graph.nodes])
    battery["trace_identity"].record(abs(np.trace(cb.R.T @ L_es @ cb.R) - np.sum(deg / sw.epsilon)))

    for mode in (Mode.SIGMA, Mode.SIGMA_HAT):
        rep = gramian_trace_bounds(edge_system(inc, cb, sw, real.noise, mode))
        battery["trace_bound_bracket"].record(max(rep.lower - rep.value, rep.value - rep.upper, 0.0))
    omega = random_pd_factor(n, rng)
    gamma = random_pd_factor(net.graph.m, rng)
    for o, g_ in ((omega, gamma), (real.noise.omega(sw), real.noise.gamma(sw))):
        for mode in (Mode.SIGMA, Mode.SIGMA_HAT):
            rep = covariance_h2_bounds(inc, cb, sw, o, g_, mode)
            battery["covariance_bound_bracket"].record(max(rep.lower - rep.value, rep.value - rep.upper, 0.0))

    ref = (h2_norm_squared(edge_system(inc, cb, sw, sep, Mode.SIGMA)), full_w, full_e)
    worst = 0.0
    for _ in range(trees - 1):
        alt = net.realize(random_spanning_tree(net.graph, rng))
        sys = edge_system(alt.inc, alt.cb, alt.sw, sep, Mode.SIGMA)
        tw, te = separated_h2(alt.inc, alt.cb, alt.sw, so, sv, Mode.SIGMA)
        worst = max(worst, abs(h2_norm_squared(sys) - ref[0]), abs(tw - ref[1]), abs(te - ref[2]))
    battery["spanning_tree_invariance"].record(worst)

    k = hat_e / full_e
    violation = max(0.0, k - 1.0, -k) if not net.graph.is_tree else abs(k - 1.0)
    battery["k_ratio_range"].record(violation if k > 0 else max(violation, 1.0))


def run_random_suite(
    n: int = 10, count: int = 50, seed: int = 0, p: float = 0.15, tree_only: bool = False
) -> Battery:
    rng = np.random.default_rng(seed)
    battery = Battery()
    for _ in range(count):
        net = random_network(n, rng, p=p, tree=tree_only)
        check_network(net, battery, rng)
    return battery


def run_network(net: Network, seed: int = 0) -> Battery:
    battery = Battery()
    check_network(net, battery, np.random.default_rng(seed))
    return battery

"""Seeded random test networks."""

from __future__ import annotations

import numpy as np

from .graph import Graph, build_graph
from .network import Network
from .operators import NoiseModel


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Random recursive tree united with an Erdos-Renyi ``G(n, p)`` sample.

    The tree guarantees connectivity; the ``G(n, p)`` edges add cycles.
    """
    edges = set()
    order = rng.permutation(n) + 1
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(k)])
        edges.add((min(u, v), max(u, v)))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < p:
                edges.add((i, j))
    return build_graph(n, sorted(edges))


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    return random_connected_graph(n, 0.0, rng)


def random_pd_factor(size: int, rng: np.random.Generator) -> np.ndarray:
    """Nonsingular square factor whose covariance ``F F^T`` is well conditioned."""
    return rng.uniform(0.5, 1.5) * np.eye(size) + 0.3 * rng.standard_normal((size, size)) / np.sqrt(size)


def random_network(
    n: int,
    rng: np.random.Generator,
    p: float = 0.15,
    low: float = 0.1,
    high: float = 2.0,
    tree: bool = False,
) -> Network:
    g = random_tree(n, rng) if tree else random_connected_graph(n, p, rng)
    eps = rng.uniform(low, high, g.n)
    w = rng.uniform(low, high, g.m)
    return Network(graph=g, epsilon=eps, weights=w, noise=NoiseModel())

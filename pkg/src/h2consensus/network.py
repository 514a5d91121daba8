"""A weighted, time-scaled network bundled with its noise model.

Per-edge data (weights, the measurement-noise factor) are kept in the order the
edges were supplied; :meth:`Network.realize` re-indexes them for a chosen
spanning tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import (
    CutBasis,
    EdgeOrdering,
    Graph,
    IncidenceDecomposition,
    build_graph,
    cut_basis,
    incidence,
    spanning_tree,
    spanning_tree_from,
)
from .operators import NoiseModel, ScaleWeightPair


@dataclass(frozen=True)
class Realization:
    graph: Graph
    ordering: EdgeOrdering
    inc: IncidenceDecomposition
    cb: CutBasis
    sw: ScaleWeightPair
    noise: NoiseModel


@dataclass(frozen=True, eq=False)
class Network:
    graph: Graph
    epsilon: np.ndarray
    weights: np.ndarray  # aligned with graph.edges
    noise: NoiseModel = NoiseModel()

    @classmethod
    def from_lists(
        cls,
        n: int,
        edges: Sequence[Sequence[int]],
        epsilon=None,
        weights=None,
        noise: NoiseModel | None = None,
    ) -> "Network":
        g = build_graph(n, edges)
        eps = np.ones(g.n) if epsilon is None else np.asarray(epsilon, dtype=float)
        w = np.ones(g.m) if weights is None else np.asarray(weights, dtype=float)
        # validates positivity and lengths
        ScaleWeightPair(epsilon=eps, weights=w)
        net = cls(graph=g, epsilon=eps, weights=w, noise=noise or NoiseModel())
        if net.noise.omega_factor is not None or net.noise.gamma_factor is not None:
            net.noise.omega(ScaleWeightPair(eps, w))
            net.noise.gamma(ScaleWeightPair(eps, w))
        return net

    def with_epsilon(self, epsilon) -> "Network":
        return Network(self.graph, np.asarray(epsilon, dtype=float), self.weights, self.noise)

    def realize(self, tree_edges: Sequence[Sequence[int]] | None = None) -> Realization:
        g = self.graph
        ordering = spanning_tree(g) if tree_edges is None else spanning_tree_from(g, tree_edges)
        inc = incidence(g, ordering)
        cb = cut_basis(inc)
        # graph.edges[k] lands at position perm[k]
        perm = ordering.permutation_from(g.edges)
        w = np.empty(g.m)
        w[perm] = self.weights
        noise = self.noise
        if noise.gamma_factor is not None:
            P = np.zeros((g.m, g.m))
            P[perm, np.arange(g.m)] = 1.0
            noise = NoiseModel(noise.sigma_omega, noise.sigma_v, noise.omega_factor, P @ noise.gamma_factor @ P.T)
        sw = ScaleWeightPair(epsilon=self.epsilon, weights=w)
        return Realization(graph=g, ordering=ordering, inc=inc, cb=cb, sw=sw, noise=noise)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented

        def same(a, b):
            if a is None or b is None:
                return a is None and b is None
            return a.shape == b.shape and np.array_equal(a, b)

        return (
            self.graph == other.graph
            and np.array_equal(self.epsilon, other.epsilon)
            and np.array_equal(self.weights, other.weights)
            and self.noise.sigma_omega == other.noise.sigma_omega
            and self.noise.sigma_v == other.noise.sigma_v
            and same(self.noise.omega_factor, other.noise.omega_factor)
            and same(self.noise.gamma_factor, other.noise.gamma_factor)
        )

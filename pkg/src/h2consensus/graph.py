"""Undirected graphs, edge orderings, incidence matrices and the cut-space basis.

Nodes are labelled ``1..n`` externally; arrays are indexed ``0..n-1``.
Every edge ``(i, j)`` is stored with ``i < j`` and oriented as ``e_i - e_j``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EmptyGraph,
    NotASpanningTree,
    SelfLoop,
    SingularTreeGram,
    ValidationError,
)

Edge = tuple[int, int]


def _normalize(edge: Sequence[int]) -> Edge:
    i, j = int(edge[0]), int(edge[1])
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Connected simple undirected graph on nodes ``1..n``."""

    n: int
    edges: tuple[Edge, ...]
    _adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adjacency[i - 1]

    @property
    def is_tree(self) -> bool:
        return self.m == self.n - 1


def build_graph(node_count: int, edge_pairs: Iterable[Sequence[int]]) -> Graph:
    """Validate ``edge_pairs`` and return a connected :class:`Graph`.

    Raises
    ------
    EmptyGraph
        Fewer than two nodes (no edge states exist).
    SelfLoop, DuplicateEdge
        Malformed edge list; the message names the offending edge.
    DisconnectedGraph
        Some node is unreachable from node 1.
    """
    n = int(node_count)
    if n < 2:
        raise EmptyGraph(f"need at least 2 nodes, got {node_count}")
    seen: set[Edge] = set()
    edges: list[Edge] = []
    for pair in edge_pairs:
        if len(pair) != 2:
            raise ValidationError(f"edge {tuple(pair)!r} is not a pair")
        i, j = int(pair[0]), int(pair[1])
        for k in (i, j):
            if not 1 <= k <= n:
                raise ValidationError(f"edge ({i}, {j}) references node {k} outside 1..{n}")
        if i == j:
            raise SelfLoop(f"self-loop at node {i}")
        e = _normalize((i, j))
        if e in seen:
            raise DuplicateEdge(f"duplicate edge ({e[0]}, {e[1]})")
        seen.add(e)
        edges.append(e)

    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        adj[i - 1].append(j)
        adj[j - 1].append(i)
    adjacency = tuple(tuple(sorted(a)) for a in adj)

    reached = _bfs_order(adjacency, 1)
    if len(reached) != n:
        missing = sorted(set(range(1, n + 1)) - set(reached))
        raise DisconnectedGraph(f"graph is disconnected; unreachable from node 1: {missing}")
    return Graph(n=n, edges=tuple(edges), _adjacency=adjacency)


def _bfs_order(adjacency, root: int) -> list[int]:
    visited = {root}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adjacency[u - 1]:
            if v not in visited:
                visited.add(v)
                order.append(v)
                queue.append(v)
    return order


def degrees(g: Graph) -> np.ndarray:
    """Unweighted node degrees as an integer array of length ``n``."""
    return np.array([len(g.neighbors(i)) for i in g.nodes], dtype=int)


@dataclass(frozen=True)
class EdgeOrdering:
    """Edge indexing with the spanning-tree edges first.

    ``edges[l]`` is the edge with (zero-based) index ``l``; indices below
    ``tree_count`` are the spanning-tree edges, the rest are cycle edges.
    """

    edges: tuple[Edge, ...]
    tree_count: int

    @property
    def tree_edges(self) -> tuple[Edge, ...]:
        return self.edges[: self.tree_count]

    @property
    def cycle_edges(self) -> tuple[Edge, ...]:
        return self.edges[self.tree_count :]

    def index(self, edge: Sequence[int]) -> int:
        """Zero-based position of ``edge`` (either orientation)."""
        return self.edges.index(_normalize(edge))

    def permutation_from(self, edges: Sequence[Sequence[int]]) -> np.ndarray:
        """Positions in this ordering of each edge of ``edges``."""
        lookup = {e: k for k, e in enumerate(self.edges)}
        return np.array([lookup[_normalize(e)] for e in edges], dtype=int)


def spanning_tree(g: Graph) -> EdgeOrdering:
    """Breadth-first spanning tree rooted at node 1, neighbours in ascending id.

    Tree edges keep discovery order; the remaining edges follow in
    lexicographic order.
    """
    visited = {1}
    queue = deque([1])
    tree: list[Edge] = []
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in visited:
                visited.add(v)
                tree.append(_normalize((u, v)))
                queue.append(v)
    return _ordering(g, tree)


def spanning_tree_from(g: Graph, tree_edges: Sequence[Sequence[int]]) -> EdgeOrdering:
    """Ordering that uses the caller's spanning tree (kept in input order)."""
    tree = [_normalize(e) for e in tree_edges]
    edge_set = set(g.edges)
    if len(tree) != g.n - 1:
        raise NotASpanningTree(f"a spanning tree on {g.n} nodes has {g.n - 1} edges, got {len(tree)}")
    if len(set(tree)) != len(tree):
        raise NotASpanningTree("tree edge list contains duplicates")
    for e in tree:
        if e not in edge_set:
            raise NotASpanningTree(f"edge {e} is not an edge of the graph")
    # n-1 distinct edges without a cycle span the graph
    parent = list(range(g.n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in tree:
        ri, rj = find(i), find(j)
        if ri == rj:
            raise NotASpanningTree(f"edge ({i}, {j}) closes a cycle")
        parent[ri] = rj
    return _ordering(g, tree)


def random_spanning_tree(g: Graph, rng: np.random.Generator) -> list[Edge]:
    """Spanning tree from Kruskal's algorithm over a random edge order."""
    parent = list(range(g.n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree: list[Edge] = []
    for k in rng.permutation(g.m):
        i, j = g.edges[k]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            tree.append((i, j))
    return tree


def _ordering(g: Graph, tree: list[Edge]) -> EdgeOrdering:
    in_tree = set(tree)
    cycle = sorted(e for e in g.edges if e not in in_tree)
    return EdgeOrdering(edges=tuple(tree) + tuple(cycle), tree_count=len(tree))


@dataclass(frozen=True)
class IncidenceDecomposition:
    D: np.ndarray
    D_tau: np.ndarray
    D_c: np.ndarray
    ordering: EdgeOrdering


def incidence(g: Graph, ordering: EdgeOrdering) -> IncidenceDecomposition:
    """Signed incidence matrix with columns in ``ordering`` order."""
    if set(ordering.edges) != set(g.edges) or len(ordering.edges) != g.m:
        raise ValidationError("edge ordering does not match the graph's edge set")
    D = np.zeros((g.n, g.m))
    for col, (i, j) in enumerate(ordering.edges):
        D[i - 1, col] = 1.0
        D[j - 1, col] = -1.0
    t = ordering.tree_count
    return IncidenceDecomposition(D=D, D_tau=D[:, :t], D_c=D[:, t:], ordering=ordering)


@dataclass(frozen=True)
class CutBasis:
    T_tau_c: np.ndarray
    R: np.ndarray


def cut_basis(inc: IncidenceDecomposition) -> CutBasis:
    """Express every cycle edge in the spanning-tree edge basis: ``R = [I  T]``."""
    D_tau, D_c = inc.D_tau, inc.D_c
    k = D_tau.shape[1]
    if k == 0 or np.linalg.matrix_rank(D_tau) < k:
        raise SingularTreeGram("tree incidence columns are linearly dependent; not a spanning tree")
    gram = D_tau.T @ D_tau
    T = np.linalg.solve(gram, D_tau.T @ D_c)
    # tree-path coefficients are exactly 0 or +-1
    T = np.round(T, 12) + 0.0
    R = np.hstack([np.eye(k), T])
    return CutBasis(T_tau_c=T, R=R)

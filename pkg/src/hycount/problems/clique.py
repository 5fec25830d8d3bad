"""Colorful k-clique detection by reduction to triangle detection."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..core import PartitionedUniverse, SubVertexSet
from .base import ReductionOracle
from .brute import colorful_cliques
from .graphs import KPartiteGraph, SimpleGraph
from .matrix import trace_count, trace_nonzero
from .partition import partition_three


def clique_to_kpartite(H: SimpleGraph, k: int) -> KPartiteGraph:
    """``k`` copies of ``V(H)``; copies in different classes inherit ``H``'s edges.

    Two copies of the same vertex are never adjacent, so every colorful
    ``k``-clique names ``k`` distinct vertices and each clique of ``H``
    appears ``k!`` times.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    block = np.asarray(H.adj, dtype=bool)
    full = np.kron(np.ones((k, k), dtype=bool) & ~np.eye(k, dtype=bool), block)
    return KPartiteGraph((H.n,) * k, full)


def _tuples(G: KPartiteGraph, classes: Sequence[int], U: SubVertexSet) -> np.ndarray:
    """Global indices of the cliques spanning ``classes`` inside ``U``, one row each."""
    offsets = G.offsets
    glob = np.zeros((1, 0), dtype=np.int64)
    for c in classes:
        g = offsets[c] + U.parts[c]
        ok = np.ones((glob.shape[0], g.size), dtype=bool)
        for p in range(glob.shape[1]):
            ok &= G.adj[glob[:, p]][:, g]
        rows, cols = np.nonzero(ok)
        glob = np.column_stack([glob[rows], g[cols]])
    return glob


def _cross(G: KPartiteGraph, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``M[x, y]``: every vertex of tuple ``x`` is adjacent to every vertex of tuple ``y``."""
    m = np.ones((a.shape[0], b.shape[0]), dtype=bool)
    for p in range(a.shape[1]):
        rows = G.adj[a[:, p]]
        for q in range(b.shape[1]):
            m &= rows[:, b[:, q]]
    return m


class CliqueOracle(ReductionOracle):
    """Does ``G[U]`` contain a colorful ``k``-clique?

    For ``k >= 3`` the classes are split three ways, each part's cliques
    become the vertices of a tripartite graph, and the answer is whether
    the product of its three biadjacency matrices has a nonzero trace.
    Smaller ``k`` is a direct scan.
    """

    def __init__(self, graph: KPartiteGraph, *, batch: str = "witness") -> None:
        super().__init__(batch)
        self.graph = graph
        self.universe = PartitionedUniverse(graph.class_sizes)

    def witnesses(self) -> np.ndarray:
        return colorful_cliques(self.graph)

    def _matrices(self, U: SubVertexSet) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
        base = math.log(max(self.universe.n, 2))
        weights = [math.log(s) / base for s in U.sizes()]
        parts = partition_three(weights)
        tuples = [_tuples(self.graph, p, U) for p in parts]
        if any(t.shape[0] == 0 for t in tuples):
            return None
        a, b, c = tuples
        return _cross(self.graph, a, b), _cross(self.graph, b, c), _cross(self.graph, c, a)

    def query(self, U: SubVertexSet) -> bool:
        if U.universe != self.universe:
            raise ValueError("query set belongs to a different universe")
        if U.measure() == 0:
            return False
        if self.k < 3:
            return colorful_cliques(self.graph, U.parts).shape[0] > 0
        mats = self._matrices(U)
        return mats is not None and trace_nonzero(*mats)

    def count(self, U: SubVertexSet) -> int:
        """Colorful cliques in ``G[U]`` as the integer trace of the same product."""
        if U.measure() == 0:
            return 0
        if self.k < 3:
            return int(colorful_cliques(self.graph, U.parts).shape[0])
        mats = self._matrices(U)
        return 0 if mats is None else trace_count(*mats)


def clique_oracle(graph: KPartiteGraph, *, batch: str = "witness") -> CliqueOracle:
    return CliqueOracle(graph, batch=batch)

"""Duplication blow-up of a subinstance back to the size of the full universe."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import PartitionedUniverse, SubVertexSet
from .graphs import KPartiteGraph


@dataclass(frozen=True)
class BlowUp:
    """Each vertex of ``U_i`` is copied ``copies[i]`` times.

    ``origin[i][o]`` is the original ordinal behind new ordinal ``o`` of
    class ``i``. Every hyperedge of ``G[U]`` turns into ``factor`` hyperedges.
    """

    copies: tuple[int, ...]
    factor: int
    origin: tuple[np.ndarray, ...]
    universe: PartitionedUniverse
    universe_source: tuple[int, ...] = ()

    def edges(self, edges: np.ndarray) -> np.ndarray:
        """Blow up an explicit edge list of the original universe."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, len(self.copies))
        alive = np.ones(edges.shape[0], dtype=bool)
        for c, orig in enumerate(self.origin):
            alive &= np.isin(edges[:, c], orig)
        out = edges[alive]
        for c, orig in enumerate(self.origin):
            rows, news = np.nonzero(out[:, c][:, None] == orig[None, :])
            out = np.column_stack([out[rows, :c], news, out[rows, c + 1 :]])
        return np.unique(out, axis=0) if out.size else out

    def graph(self, G: KPartiteGraph) -> KPartiteGraph:
        """Blow up a k-partite graph whose classes match the universe."""
        if G.class_sizes != self.universe_source:
            raise ValueError("graph classes do not match the original universe")
        glob = np.concatenate([G.offsets[c] + o for c, o in enumerate(self.origin)])
        adj = G.adj[np.ix_(glob, glob)].copy()
        np.fill_diagonal(adj, False)
        return KPartiteGraph(self.universe.class_sizes, adj)


def duplicate_blowup(U: SubVertexSet, universe: PartitionedUniverse | None = None) -> BlowUp:
    """Copy every vertex of ``U_i`` ``ceil(|V_i| / |U_i|)`` times."""
    universe = universe or U.universe
    if U.universe != universe:
        raise ValueError("the set belongs to a different universe")
    sizes = U.sizes()
    if any(s == 0 for s in sizes):
        raise ValueError("every class of the set must be nonempty")
    copies = tuple(-(-v // u) for v, u in zip(universe.class_sizes, sizes))
    origin = tuple(np.repeat(U.parts[c], copies[c]) for c in range(universe.k))
    for o in origin:
        o.setflags(write=False)
    new = PartitionedUniverse(tuple(int(o.size) for o in origin))
    return BlowUp(copies, math.prod(copies), origin, new, universe.class_sizes)

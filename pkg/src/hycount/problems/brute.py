"""Exhaustive scans: the ground truth every oracle and reduction is checked against."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .graphs import KPartiteGraph, SimpleGraph

Parts = Sequence[Sequence[int] | np.ndarray]


def tuple_space(sizes: Sequence[int]) -> int:
    return math.prod(int(s) for s in sizes)


def _parts(sizes: Sequence[int], parts: Parts | None) -> list[np.ndarray]:
    if parts is None:
        return [np.arange(s, dtype=np.int64) for s in sizes]
    if len(parts) != len(sizes):
        raise ValueError("one ordinal list per class is required")
    return [np.asarray(p, dtype=np.int64).reshape(-1) for p in parts]


def colorful_cliques(G: KPartiteGraph, parts: Parts | None = None) -> np.ndarray:
    """All tuples ``(o_0, ..., o_{k-1})`` with one vertex per class, pairwise adjacent."""
    cand = _parts(G.class_sizes, parts)
    offsets = G.offsets
    tuples = np.zeros((1, 0), dtype=np.int64)
    glob = np.zeros((1, 0), dtype=np.int64)
    for c, ords in enumerate(cand):
        g = offsets[c] + ords
        ok = np.ones((tuples.shape[0], ords.size), dtype=bool)
        for p in range(c):
            ok &= G.adj[glob[:, p]][:, g]
        rows, cols = np.nonzero(ok)
        tuples = np.column_stack([tuples[rows], ords[cols]])
        glob = np.column_stack([glob[rows], g[cols]])
        if tuples.shape[0] == 0:
            break
    return tuples.reshape(-1, G.k) if tuples.shape[1] == G.k else np.zeros((0, G.k), dtype=np.int64)


def count_colorful_cliques(G: KPartiteGraph, parts: Parts | None = None) -> int:
    return int(colorful_cliques(G, parts).shape[0])


def count_cliques(H: SimpleGraph, k: int) -> int:
    """Number of ``k``-vertex cliques of ``H`` (as vertex sets)."""
    if k < 1:
        raise ValueError("k must be positive")
    return sum(
        1
        for S in itertools.combinations(range(H.n), k)
        if all(H.adj[u, v] for u, v in itertools.combinations(S, 2))
    )


def dominates(H: SimpleGraph, S: Sequence[int]) -> bool:
    """Closed-neighbourhood domination: every vertex is in ``S`` or next to it."""
    if H.n == 0:
        return True
    if not len(S):
        return False
    return bool(H.closed_neighborhoods()[list(S)].any(axis=0).all())


def count_dominating_sets(H: SimpleGraph, k: int) -> int:
    """Number of ``k``-subsets of ``V(H)`` that dominate ``H``."""
    return sum(1 for S in itertools.combinations(range(H.n), k) if dominates(H, S))


def special_ds_tuples(
    G: KPartiteGraph, names: Sequence[int], parts: Parts | None = None
) -> np.ndarray:
    """Colorful tuples of ``G`` with distinct names that dominate all of ``G``.

    ``names[x]`` is the original vertex behind global vertex ``x``. Domination
    is checked on ``G`` itself with closed neighbourhoods.
    """
    cand = _parts(G.class_sizes, parts)
    names = np.asarray(names, dtype=np.int64)
    closed = G.adj | np.eye(G.adj.shape[0], dtype=bool)
    offsets = G.offsets
    out = []
    for combo in itertools.product(*[c.tolist() for c in cand]):
        glob = [offsets[c] + o for c, o in enumerate(combo)]
        if len(set(names[glob].tolist())) != len(glob):
            continue
        if closed[glob].any(axis=0).all():
            out.append(combo)
    return np.array(out, dtype=np.int64).reshape(-1, G.k)


def ordered_zero_sums(values: Sequence[int], k: int) -> int:
    """Ordered ``k``-tuples of positions in ``values`` whose entries sum to zero."""
    return sum(1 for t in itertools.product(values, repeat=k) if sum(t) == 0)


def colorful_zero_sums(lists: Sequence[Sequence[int]], parts: Parts | None = None) -> np.ndarray:
    """Index tuples, one per list, whose values sum to zero."""
    cand = _parts([len(a) for a in lists], parts)
    py = [[int(a[i]) for i in c.tolist()] for a, c in zip(lists, cand)]
    out = [
        tuple(int(cand[c][i]) for c, i in enumerate(idx))
        for idx in itertools.product(*[range(len(p)) for p in py])
        if sum(py[c][i] for c, i in enumerate(idx)) == 0
    ]
    return np.array(out, dtype=np.int64).reshape(-1, len(lists))


def hyperedges_within(edges: np.ndarray, parts: Parts) -> int:
    """Distinct hyperedges of ``edges`` inside the per-class ordinal sets ``parts``."""
    edges = np.unique(np.asarray(edges, dtype=np.int64).reshape(-1, len(parts)), axis=0)
    alive = np.ones(edges.shape[0], dtype=bool)
    for c, p in enumerate(parts):
        alive &= np.isin(edges[:, c], np.asarray(p, dtype=np.int64))
    return int(alive.sum())

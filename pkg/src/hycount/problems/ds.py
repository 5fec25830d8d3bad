"""Special k-dominating-set detection through an undominated-count matrix product."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import PartitionedUniverse, SubVertexSet
from .base import ReductionOracle
from .brute import special_ds_tuples
from .graphs import KPartiteGraph, SimpleGraph
from .matrix import count_matmul
from .partition import partition_two


@dataclass(frozen=True)
class DSReduction:
    """``H′`` with its color map ``φ`` and name map ``χ`` over global vertex indices."""

    graph: KPartiteGraph
    source: SimpleGraph
    colors: np.ndarray
    names: np.ndarray

    @property
    def k(self) -> int:
        return self.graph.k


def ds_to_kpartite(H: SimpleGraph, k: int) -> DSReduction:
    """``V′ = V × [k]`` with ``H``'s edges between all copies plus copy-edges.

    Copy-edges join ``(u, i)`` and ``(u, j)`` for ``i != j``. Without them a
    vertex only dominated by itself would leave its other copies undominated.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = H.n
    copies = np.ones((k, k), dtype=bool) & ~np.eye(k, dtype=bool)
    adj = np.kron(np.ones((k, k), dtype=bool), H.adj) | np.kron(copies, np.eye(n, dtype=bool))
    colors = np.repeat(np.arange(k), n)
    names = np.tile(np.arange(n), k)
    for a in (colors, names):
        a.setflags(write=False)
    return DSReduction(KPartiteGraph((n,) * k, adj), H, colors, names)


class DSOracle(ReductionOracle):
    """Does ``U`` contain a colorful, name-distinct tuple that dominates ``H``?

    For ``k >= 2`` the classes are split in two, ``M_i[x, y] = 1`` marks an
    original vertex ``y`` not dominated by tuple ``x``, and a zero entry of
    ``M_1 M_2^T`` is a dominating pair that only needs a distinctness check.
    """

    def __init__(self, reduction: DSReduction, *, batch: str = "witness") -> None:
        super().__init__(batch)
        self.reduction = reduction
        self.universe = PartitionedUniverse(reduction.graph.class_sizes)
        self._closed = reduction.source.closed_neighborhoods()

    def witnesses(self) -> np.ndarray:
        return special_ds_tuples(self.reduction.graph, self.reduction.names)

    def _tuples(self, classes: Sequence[int], U: SubVertexSet) -> np.ndarray:
        """Name-distinct tuples (as original vertex names) over ``classes``."""
        out = [
            t
            for t in itertools.product(*[U.parts[c].tolist() for c in classes])
            if len(set(t)) == len(t)
        ]
        return np.array(out, dtype=np.int64).reshape(-1, len(classes))

    def _undominated(self, tuples: np.ndarray) -> np.ndarray:
        n = self._closed.shape[0]
        if tuples.shape[1] == 0:
            return np.ones((tuples.shape[0], n), dtype=bool)
        covered = np.zeros((tuples.shape[0], n), dtype=bool)
        for p in range(tuples.shape[1]):
            covered |= self._closed[tuples[:, p]]
        return ~covered

    def query(self, U: SubVertexSet) -> bool:
        if U.universe != self.universe:
            raise ValueError("query set belongs to a different universe")
        if U.measure() == 0:
            return False
        if self.k == 1:
            return bool(self._undominated(U.parts[0][:, None]).sum(axis=1).min() == 0)
        base = math.log(max(self.universe.n, 2))
        first, second = partition_two([math.log(s) / base for s in U.sizes()])
        a, b = self._tuples(first, U), self._tuples(second, U)
        if a.shape[0] == 0 or b.shape[0] == 0:
            return False
        counts = count_matmul(self._undominated(a).astype(np.int64), self._undominated(b).T.astype(np.int64))
        for x, y in zip(*np.nonzero(counts == 0)):
            if not set(a[x].tolist()) & set(b[y].tolist()):
                return True
        return False


def ds_oracle(reduction: DSReduction, *, batch: str = "witness") -> DSOracle:
    return DSOracle(reduction, batch=batch)

"""Detection oracles and adapters.

An oracle answers ``query(U)``: does the induced sub-hypergraph ``G[U]``
contain a hyperedge? Besides single queries, every oracle accepts two batch
forms that the estimator uses to issue many independent queries at once:

``query_masks(masks)``
    ``masks[c]`` is an ``(n_c, B)`` boolean array; column ``b`` across all
    classes describes one set ``U_b``. Returns ``B`` answers.

``extension_answers(masks, h)``
    For every column ``b`` and every vertex ``v`` of ``U_b`` in class ``h``,
    answers ``query((U_b minus class h) | {v})``. Returns an ``(n_h, B)``
    boolean array that is ``False`` outside ``U_b``.

A batch is exactly the list of single queries it stands for: the adapters
count each one, and an oracle's batch answers must equal its single answers.
The defaults below loop over :meth:`DetectionOracle.query`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import PartitionedUniverse, SubVertexSet, VertexId

Masks = Sequence[np.ndarray]

_BATCH_CHUNK = 1 << 15


class DetectionOracle:
    """Base class for hyperedge-detection oracles."""

    universe: PartitionedUniverse

    @property
    def k(self) -> int:
        return self.universe.k

    def query(self, U: SubVertexSet) -> bool:
        raise NotImplementedError

    def query_masks(self, masks: Masks) -> np.ndarray:
        B = batch_size(masks)
        out = np.zeros(B, dtype=bool)
        for b in range(B):
            out[b] = self.query(column_set(self.universe, masks, b))
        return out

    def extension_answers(self, masks: Masks, h: int) -> np.ndarray:
        B = batch_size(masks)
        out = np.zeros(masks[h].shape, dtype=bool)
        for b in range(B):
            U = column_set(self.universe, masks, b)
            for o in U.parts[h].tolist():
                out[o, b] = self.query(U.with_class(h, [o]))
        return out

    def extension_answers_all(self, masks: Masks) -> list[np.ndarray]:
        """:meth:`extension_answers` for every class, in class order."""
        return [self.extension_answers(masks, h) for h in range(self.k)]

    def query_many(self, sets: Sequence[SubVertexSet]) -> np.ndarray:
        if not sets:
            return np.zeros(0, dtype=bool)
        return self.query_masks(stack_masks(self.universe, sets))


def batch_size(masks: Masks) -> int:
    return int(masks[0].shape[1])


def column_set(universe: PartitionedUniverse, masks: Masks, b: int) -> SubVertexSet:
    return SubVertexSet.from_masks(universe, [m[:, b] for m in masks])


def stack_masks(universe: PartitionedUniverse, sets: Sequence[SubVertexSet]) -> list[np.ndarray]:
    """Class-major batch masks, one column per set."""
    masks = [np.zeros((s, len(sets)), dtype=bool) for s in universe.class_sizes]
    for b, U in enumerate(sets):
        for c, arr in enumerate(U.parts):
            masks[c][arr, b] = True
    return masks


def count_true(m: np.ndarray, axis: int) -> np.ndarray:
    """Fast ``count_nonzero`` for boolean arrays along ``axis``."""
    length = m.shape[axis]
    dtype = np.uint8 if length < 1 << 8 else np.uint16 if length < 1 << 16 else np.int64
    return np.add.reduce(m.view(np.uint8), axis=axis, dtype=dtype).astype(np.int64)


def column_sizes(masks: Masks) -> np.ndarray:
    """``(B, k)`` per-set class sizes."""
    return np.stack([count_true(m, 0) for m in masks], axis=1)


class BruteForceOracle(DetectionOracle):
    """Ground-truth oracle over an explicit edge list.

    Batch queries pack the masks into bits along the batch axis and AND the
    packed rows of each edge's vertices, so one numpy pass answers eight
    queries per byte.
    """

    def __init__(self, universe: PartitionedUniverse, edges: Iterable[Sequence[int]]):
        self.universe = universe
        k = universe.k
        rows = [tuple(int(x) for x in e) for e in edges]
        for e in rows:
            if len(e) != k:
                raise ValueError(f"edge {e} does not have one vertex per class")
            for c, o in enumerate(e):
                if not 0 <= o < universe.class_sizes[c]:
                    raise ValueError(f"edge {e} has an ordinal outside class {c}")
        arr = np.array(sorted(set(rows)), dtype=np.int64).reshape(-1, k)
        arr.setflags(write=False)
        self.edges = arr
        self._groups: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def _alive(self, U: SubVertexSet) -> np.ndarray:
        alive = np.ones(self.m, dtype=bool)
        for c, mask in enumerate(U.masks()):
            alive &= mask[self.edges[:, c]]
        return alive

    def query(self, U: SubVertexSet) -> bool:
        if self.m == 0 or U.measure() == 0:
            return False
        return bool(self._alive(U).any())

    def exact_count(self, U: SubVertexSet | None = None) -> int:
        if U is None:
            return self.m
        return int(self._alive(U).sum()) if self.m else 0

    def exact_degree(self, v: VertexId, U: SubVertexSet | None = None) -> int:
        c, o = v
        hit = self.edges[:, c] == o
        if U is not None:
            hit &= self._alive(U) if self.m else hit
        return int(hit.sum())

    def degrees(self, U: SubVertexSet | None = None) -> list[np.ndarray]:
        """Per-class degree arrays in ``G[U]``."""
        alive = np.ones(self.m, dtype=bool) if U is None else self._alive(U)
        live = self.edges[alive]
        return [
            np.bincount(live[:, c], minlength=s) for c, s in enumerate(self.universe.class_sizes)
        ]

    def non_isolated(self, U: SubVertexSet | None = None) -> set[VertexId]:
        out = set()
        for c, deg in enumerate(self.degrees(U)):
            out.update(VertexId(c, int(o)) for o in np.flatnonzero(deg))
        return out

    def _packed_product(self, packed: list[np.ndarray], classes: Iterable[int]) -> np.ndarray:
        acc = None
        for c in classes:
            rows = packed[c][self.edges[:, c]]
            acc = rows if acc is None else np.bitwise_and(acc, rows, out=acc)
        return acc

    def query_masks(self, masks: Masks) -> np.ndarray:
        B = batch_size(masks)
        out = np.zeros(B, dtype=bool)
        if self.m == 0 or B == 0:
            return out
        for lo in range(0, B, _BATCH_CHUNK):
            hi = min(B, lo + _BATCH_CHUNK)
            packed = [np.packbits(m[:, lo:hi], axis=1) for m in masks]
            acc = self._packed_product(packed, range(self.k))
            hit = np.bitwise_or.reduce(acc, axis=0)
            out[lo:hi] = np.unpackbits(hit, count=hi - lo).view(bool)
        return out

    def _grouping(self, h: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if h not in self._groups:
            order = np.argsort(self.edges[:, h], kind="stable")
            col = self.edges[order, h]
            starts = np.flatnonzero(np.r_[True, col[1:] != col[:-1]])
            self._groups[h] = (order, starts, col[starts])
        return self._groups[h]

    def extension_answers(self, masks: Masks, h: int) -> np.ndarray:
        return self._extensions(masks, [h])[0]

    def extension_answers_all(self, masks: Masks) -> list[np.ndarray]:
        return self._extensions(masks, range(self.k))

    def _extensions(self, masks: Masks, classes: Iterable[int]) -> list[np.ndarray]:
        B = batch_size(masks)
        classes = list(classes)
        outs = [np.zeros(masks[h].shape, dtype=bool) for h in classes]
        if self.m == 0 or B == 0:
            return outs
        for lo in range(0, B, _BATCH_CHUNK):
            hi = min(B, lo + _BATCH_CHUNK)
            packed = [np.packbits(m[:, lo:hi], axis=1) for m in masks]
            for out, h in zip(outs, classes):
                order, starts, owners = self._grouping(h)
                others = [c for c in range(self.k) if c != h]
                if others:
                    acc = self._packed_product(packed, others)[order]
                else:
                    acc = np.full((self.m, packed[h].shape[1]), 0xFF, dtype=np.uint8)
                grouped = np.bitwise_or.reduceat(acc, starts, axis=0)
                out[owners, lo:hi] = np.unpackbits(grouped, axis=1, count=hi - lo).view(bool)
        for out, h in zip(outs, classes):
            out &= masks[h]
        return outs


def brute_force_oracle(
    universe: PartitionedUniverse, edge_list: Iterable[Sequence[int]]
) -> BruteForceOracle:
    """Build the reference oracle. Edge entries are per-class ordinals."""
    return BruteForceOracle(universe, edge_list)


@dataclass
class QueryStats:
    total_queries: int = 0
    max_measure: int = 0
    measure_log: list[int] | None = field(default_factory=list)
    log_cap: int = 1_000_000

    def record(self, measures: Sequence[int] | np.ndarray) -> None:
        arr = np.asarray(measures, dtype=np.int64).reshape(-1)
        if arr.size == 0:
            return
        self.total_queries += int(arr.size)
        self.max_measure = max(self.max_measure, int(arr.max()))
        if self.measure_log is not None and len(self.measure_log) < self.log_cap:
            room = self.log_cap - len(self.measure_log)
            self.measure_log.extend(arr[:room].tolist())


class InstrumentedOracle(DetectionOracle):
    """Transparent wrapper that counts queries and records their measures."""

    def __init__(self, inner: DetectionOracle, *, log_measures: bool = True, log_cap: int = 1_000_000):
        self.inner = inner
        self.universe = inner.universe
        self.stats = QueryStats(measure_log=[] if log_measures else None, log_cap=log_cap)
        self._lock = threading.Lock()

    def _record(self, measures: Sequence[int] | np.ndarray) -> None:
        with self._lock:
            self.stats.record(measures)

    def query(self, U: SubVertexSet) -> bool:
        self._record([U.measure()])
        return self.inner.query(U)

    def query_masks(self, masks: Masks) -> np.ndarray:
        self._record(np.prod(column_sizes(masks), axis=1))
        return self.inner.query_masks(masks)

    def extension_answers(self, masks: Masks, h: int) -> np.ndarray:
        self._record(extension_measures(masks, h))
        return self.inner.extension_answers(masks, h)

    def extension_answers_all(self, masks: Masks) -> list[np.ndarray]:
        sizes = column_sizes(masks)
        for h in range(self.k):
            self._record(extension_measures(masks, h, sizes))
        return self.inner.extension_answers_all(masks)


def extension_measures(masks: Masks, h: int, sizes: np.ndarray | None = None) -> np.ndarray:
    """Measures of the singleton-extension queries, one per asked vertex."""
    if sizes is None:
        sizes = column_sizes(masks)
    other = np.prod(np.delete(sizes, h, axis=1), axis=1)
    return np.repeat(other, sizes[:, h])


def instrument(inner: DetectionOracle, **kwargs) -> tuple[InstrumentedOracle, QueryStats]:
    wrapped = InstrumentedOracle(inner, **kwargs)
    return wrapped, wrapped.stats


class PinnedOracle(DetectionOracle):
    """``(k-1)``-dimensional view of ``inner`` with vertex ``v`` always present."""

    def __init__(self, inner: DetectionOracle, v: VertexId):
        if inner.k < 2:
            raise ValueError("cannot pin the last remaining class")
        v = VertexId(int(v[0]), int(v[1]))
        if not inner.universe.contains(v):
            raise ValueError(f"vertex {v} is outside the oracle's universe")
        self.inner = inner
        self.vertex = v
        self.universe = inner.universe.without_class(v.part)

    def _lift(self, masks: Masks) -> list[np.ndarray]:
        c, o = self.vertex
        B = batch_size(masks)
        col = np.zeros((self.inner.universe.class_sizes[c], B), dtype=bool)
        col[o] = True
        return list(masks[:c]) + [col] + list(masks[c:])

    def query(self, U: SubVertexSet) -> bool:
        if U.universe != self.universe:
            raise ValueError("query set belongs to a different universe")
        return self.inner.query(U.insert_vertex(self.vertex, self.inner.universe))

    def query_masks(self, masks: Masks) -> np.ndarray:
        return self.inner.query_masks(self._lift(masks))

    def extension_answers(self, masks: Masks, h: int) -> np.ndarray:
        inner_h = h if h < self.vertex.part else h + 1
        return self.inner.extension_answers(self._lift(masks), inner_h)

    def extension_answers_all(self, masks: Masks) -> list[np.ndarray]:
        lifted = self._lift(masks)
        return [
            self.inner.extension_answers(lifted, h if h < self.vertex.part else h + 1)
            for h in range(self.k)
        ]


def pin(inner: DetectionOracle, v: VertexId | tuple[int, int]) -> PinnedOracle:
    return PinnedOracle(inner, VertexId(*v))


class BudgetExhausted(Exception):
    """Raised before a query that would exceed a :class:`BudgetedOracle` budget."""


class BudgetedOracle(DetectionOracle):
    """Forwards queries while their running count stays within ``budget``.

    A batch that would cross the budget is refused as a whole, so the
    transcript never exceeds it.
    """

    def __init__(self, inner: DetectionOracle, budget: float):
        self.inner = inner
        self.universe = inner.universe
        self.budget = budget
        self.used = 0

    def _charge(self, count: int) -> None:
        if self.used + count > self.budget:
            raise BudgetExhausted(f"query budget {self.budget:g} exhausted")
        self.used += count

    def query(self, U: SubVertexSet) -> bool:
        self._charge(1)
        return self.inner.query(U)

    def query_masks(self, masks: Masks) -> np.ndarray:
        self._charge(batch_size(masks))
        return self.inner.query_masks(masks)

    def extension_answers(self, masks: Masks, h: int) -> np.ndarray:
        self._charge(int(count_true(masks[h], 0).sum()))
        return self.inner.extension_answers(masks, h)

    def extension_answers_all(self, masks: Masks) -> list[np.ndarray]:
        self._charge(int(column_sizes(masks).sum()))
        return self.inner.extension_answers_all(masks)

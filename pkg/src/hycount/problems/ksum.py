"""Colorful k-sum: the reduction from ordered k-sum and its detection oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import PartitionedUniverse, SubVertexSet
from .base import ReductionOracle
from .partition import partition_two

# Signed 128-bit range; Python integers carry the arithmetic exactly.
WIDE_BITS = 128
_WIDE_MAX = (1 << (WIDE_BITS - 1)) - 1
_I64_MAX = (1 << 62) - 1


@dataclass(frozen=True)
class KSumInstance:
    """``k`` lists of integers; a solution picks one entry per list summing to zero."""

    lists: tuple[tuple[int, ...], ...]
    bound: int

    def __post_init__(self) -> None:
        lists = tuple(tuple(int(v) for v in a) for a in self.lists)
        if not lists:
            raise ValueError("at least one list is required")
        object.__setattr__(self, "lists", lists)
        for a in lists:
            for v in a:
                if abs(v) > _WIDE_MAX:
                    raise OverflowError(f"value {v} does not fit the wide integer type")

    @property
    def k(self) -> int:
        return len(self.lists)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.lists)


def ksum_offsets(k: int, bound: int) -> list[int]:
    """``3^i·10·U`` for the first ``k - 1`` lists and minus their sum for the last."""
    head = [3 ** (i + 1) * 10 * bound for i in range(k - 1)]
    return head + [-sum(head)]


def ksum_to_colorful(values: Sequence[int], k: int, bound: int) -> KSumInstance:
    """Shift ``k`` copies of ``values`` by offsets that sum to zero.

    A colorful zero-sum of the result is exactly an ordered ``k``-tuple of
    positions in ``values`` whose entries sum to zero.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    values = [int(v) for v in values]
    for v in values:
        if abs(v) > bound:
            raise ValueError(f"value {v} exceeds the bound {bound}")
    offsets = ksum_offsets(k, bound)
    # every partial sum of the shifted lists stays below this in magnitude
    if 10 * bound * 3**k * k + k * bound > _WIDE_MAX:
        raise OverflowError("offsets overflow the wide integer type")
    return KSumInstance(tuple(tuple(v + off for v in values) for off in offsets), bound)


def _partial_sums(lists: Sequence[Sequence[int]], classes: Sequence[int], U: SubVertexSet, wide: bool) -> np.ndarray:
    sums = np.zeros(1, dtype=object if wide else np.int64)
    for c in classes:
        vals = np.array([lists[c][i] for i in U.parts[c].tolist()], dtype=object if wide else np.int64)
        sums = (sums[:, None] + vals[None, :]).reshape(-1)
    return sums


class KSumOracle(ReductionOracle):
    """Does some tuple over ``U`` (one index per list) sum to zero?

    The lists are split in two, the partial sums of each side are listed,
    and the larger side is sorted once so each negated smaller-side sum is
    a binary search.
    """

    def __init__(self, instance: KSumInstance, *, batch: str = "witness") -> None:
        super().__init__(batch)
        self.instance = instance
        self.universe = PartitionedUniverse(instance.sizes())
        peak = sum(max((abs(v) for v in a), default=0) for a in instance.lists)
        self._wide = peak > _I64_MAX

    def witnesses(self) -> np.ndarray:
        lists = self.instance.lists
        if self.k == 1:
            return np.array([[i] for i, v in enumerate(lists[0]) if v == 0], dtype=np.int64).reshape(-1, 1)
        full = self.universe.full()
        head = _partial_sums(lists, range(self.k - 1), full, self._wide)
        last = {}
        for i, v in enumerate(lists[-1]):
            last.setdefault(v, []).append(i)
        sizes = self.universe.class_sizes[:-1]
        out = []
        for flat, s in enumerate(head.tolist()):
            for i in last.get(-s, ()):
                out.append(tuple(int(x) for x in np.unravel_index(flat, sizes)) + (i,))
        out.sort()
        return np.array(out, dtype=np.int64).reshape(-1, self.k)

    def query(self, U: SubVertexSet) -> bool:
        if U.universe != self.universe:
            raise ValueError("query set belongs to a different universe")
        if U.measure() == 0:
            return False
        lists = self.instance.lists
        if self.k == 1:
            return any(lists[0][i] == 0 for i in U.parts[0].tolist())
        base = math.log(max(self.universe.n, 2))
        first, second = partition_two([math.log(s) / base for s in U.sizes()])
        a = _partial_sums(lists, first, U, self._wide)
        b = _partial_sums(lists, second, U, self._wide)
        small, large = (a, b) if a.size <= b.size else (b, a)
        large = np.sort(large)
        targets = -small
        pos = np.searchsorted(large, targets)
        pos = np.minimum(pos, large.size - 1)
        return bool((large[pos] == targets).any())


def ksum_oracle(instance: KSumInstance, *, batch: str = "witness") -> KSumOracle:
    return KSumOracle(instance, batch=batch)

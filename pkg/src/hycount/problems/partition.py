"""Balanced partitions of class indices by weight.

Both partitions use longest-processing-time greedy: indices are taken in
descending weight (ties by ascending index) and each goes to the currently
lightest part (ties by fewer members, then lower part number). The heaviest
and lightest resulting parts then differ by at most the largest single
weight. With weights ``log_n |U_j|`` (each at most 1) that gives
``x_3 <= n * x_1`` for the part products.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Weight = float | int | Fraction


def _lpt(weights: Sequence[Weight], parts: int) -> tuple[tuple[int, ...], ...]:
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    order = sorted(range(len(weights)), key=lambda i: (-weights[i], i))
    members: list[list[int]] = [[] for _ in range(parts)]
    load: list[Weight] = [0] * parts
    for i in order:
        p = min(range(parts), key=lambda q: (load[q], len(members[q]), q))
        members[p].append(i)
        load[p] += weights[i]
    groups = [tuple(sorted(m)) for m in members]
    loads = [sum((weights[i] for i in g), 0) for g in groups]
    ranked = sorted(range(parts), key=lambda p: (loads[p], groups[p][0] if groups[p] else len(weights)))
    return tuple(groups[p] for p in ranked)


def partition_three(log_sizes: Sequence[Weight]) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Split ``range(k)`` into three nonempty parts of near-equal weight, lightest first."""
    if len(log_sizes) < 3:
        raise ValueError("partition_three needs at least three indices")
    a, b, c = _lpt(log_sizes, 3)
    return a, b, c


def partition_two(log_sizes: Sequence[Weight]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split ``range(k)`` into two nonempty parts of near-equal weight, lightest first."""
    if len(log_sizes) < 2:
        raise ValueError("partition_two needs at least two indices")
    a, b = _lpt(log_sizes, 2)
    return a, b


def part_weights(log_sizes: Sequence[Weight], parts: Sequence[Sequence[int]]) -> list[Weight]:
    return [sum((log_sizes[i] for i in p), 0) for p in parts]

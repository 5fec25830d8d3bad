"""Deterministic extraction of non-isolated vertices and exact base-case counting.

Query bounds, with ``n`` the total vertex count of the oracle's universe:

* :func:`find_non_isolated` issues at most ``FNI_C * k * sigma * log2(max(n, 2)) + 1``
  queries (the ``+ 1`` is the initial whole-set query).
* :func:`base_case_count` on a subinstance with ``m`` edges issues at most
  ``BASE_C * m * k * log2(n) + BASE_C`` queries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SubVertexSet, VertexId
from .oracle import DetectionOracle, batch_size, column_set, column_sizes, count_true

FNI_C = 4
BASE_C = 4


@dataclass(frozen=True)
class Found:
    vertices: frozenset[VertexId]


class Overflow:
    """The ``⊥`` outcome: too many non-isolated vertices or edges."""

    _instance: "Overflow | None" = None

    def __new__(cls) -> "Overflow":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OVERFLOW"


OVERFLOW = Overflow()

NonIsolatedResult = Found | Overflow


def _tiled(base: list[np.ndarray], cols: int) -> list[np.ndarray]:
    return [np.repeat(m[:, None], cols, axis=1) for m in base]


def find_non_isolated(
    oracle: DetectionOracle, U: SubVertexSet, sigma: int, *, prechecked: bool = False
) -> NonIsolatedResult:
    """Return the non-isolated vertices of ``G[U]``, or ``OVERFLOW``.

    Each class is handled by splitting its surviving candidates into
    ``sigma`` balanced blocks and dropping the blocks whose extension query
    is false. Fewer than ``sigma`` candidates are tested one by one. With
    ``prechecked`` the caller vouches that ``oracle.query(U)`` is true.
    """
    if sigma < 2:
        raise ValueError("sigma must be at least 2")
    if U.measure() == 0:
        return Found(frozenset())
    if not prechecked and not oracle.query(U):
        return Found(frozenset())
    base = list(U.masks())
    found: list[VertexId] = []
    for h in range(U.k):
        cand = U.parts[h]
        while cand.size >= sigma:
            blocks = np.array_split(cand, sigma)
            masks = _tiled(base, sigma)
            masks[h][:] = False
            for i, block in enumerate(blocks):
                masks[h][block, i] = True
            answers = oracle.query_masks(masks)
            if answers.all():
                return OVERFLOW
            kept = [b for b, a in zip(blocks, answers) if a]
            cand = np.concatenate(kept) if kept else cand[:0]
        if cand.size:
            masks = _tiled(base, 1)
            masks[h][:] = False
            masks[h][cand, 0] = True
            answers = oracle.extension_answers(masks, h)[:, 0]
            found.extend(VertexId(h, int(o)) for o in cand if answers[o])
    if len(found) >= sigma:
        return OVERFLOW
    return Found(frozenset(found))


def find_non_isolated_batch(
    oracle: DetectionOracle, masks: list[np.ndarray], sigma: int
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Run :func:`find_non_isolated` on every column of ``masks``.

    Returns ``(overflow, hits)``: a ``(B,)`` flag array and per-class
    ``(n_c, B)`` arrays marking the found vertices (all-false for overflow
    columns). Each column issues exactly the queries of the sequential call;
    columns with every class below ``sigma`` share one batched singleton pass.
    """
    if sigma < 2:
        raise ValueError("sigma must be at least 2")
    B = batch_size(masks)
    overflow = np.zeros(B, dtype=bool)
    hits = [np.zeros(m.shape, dtype=bool) for m in masks]
    sizes = column_sizes(masks)
    cols = np.flatnonzero((sizes > 0).all(axis=1))
    if cols.size == 0:
        return overflow, hits
    answers = oracle.query_masks([m[:, cols] for m in masks])
    cols = cols[answers]
    small = (sizes[cols] < sigma).all(axis=1)
    fast, slow = cols[small], cols[~small]
    if fast.size:
        sub = [m[:, fast] for m in masks]
        total = np.zeros(fast.size, dtype=np.int64)
        answers_by_class = oracle.extension_answers_all(sub)
        for ans in answers_by_class:
            total += count_true(ans, 0)
        keep = total < sigma
        overflow[fast[~keep]] = True
        for h, ans in enumerate(answers_by_class):
            hits[h][:, fast[keep]] = ans[:, keep]
    universe = oracle.universe
    for b in slow.tolist():
        res = find_non_isolated(oracle, column_set(universe, masks, b), sigma, prechecked=True)
        if isinstance(res, Overflow):
            overflow[b] = True
        else:
            for c, o in res.vertices:
                hits[c][o, b] = True
    return overflow, hits


def _range_masks(U: SubVertexSet, lo: np.ndarray, hi: np.ndarray) -> list[np.ndarray]:
    masks = []
    for c, (size, cand) in enumerate(zip(U.universe.class_sizes, U.parts)):
        # narrow contiguous operands keep the broadcast compare cheap
        dtype = np.int16 if size + 1 < 1 << 15 else np.int64
        # position of each universe vertex in the candidate list; outsiders never fit
        pos = np.full(size, size + 1, dtype=dtype)
        pos[cand] = np.arange(cand.size)
        col = pos[:, None]
        inside = col >= lo[:, c].astype(dtype)
        inside &= col < hi[:, c].astype(dtype)
        masks.append(inside)
    return masks


def base_case_count(
    oracle: DetectionOracle, U: SubVertexSet, cap: float | None = None
) -> int | Overflow:
    """Exact number of hyperedges in ``G[U]``, or ``OVERFLOW`` past ``cap``.

    A state is a box of contiguous ranges in each class's candidate list.
    A true state is split on its lowest-indexed class with at least two
    candidates. All states of one recursion depth are queried as a batch,
    which issues the same queries as the depth-first recursion.
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be at least 1")
    if U.measure() == 0:
        return 0
    k = U.k
    lo = np.zeros((1, k), dtype=np.int64)
    hi = np.array([U.sizes()], dtype=np.int64)
    count = 0
    while lo.shape[0]:
        answers = oracle.query_masks(_range_masks(U, lo, hi))
        lo, hi = lo[answers], hi[answers]
        width = hi - lo
        splittable = width >= 2
        inner = splittable.any(axis=1)
        count += int((~inner).sum())
        if cap is not None and count > cap:
            return OVERFLOW
        lo, hi, width, splittable = lo[inner], hi[inner], width[inner], splittable[inner]
        if lo.shape[0] == 0:
            break
        idx = np.arange(lo.shape[0])
        col = splittable.argmax(axis=1)
        mid = lo[idx, col] + width[idx, col] // 2
        left_hi = hi.copy()
        left_hi[idx, col] = mid
        right_lo = lo.copy()
        right_lo[idx, col] = mid
        lo = np.stack([lo, right_lo], axis=1).reshape(-1, k)
        hi = np.stack([left_hi, hi], axis=1).reshape(-1, k)
    return count

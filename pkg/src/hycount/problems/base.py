"""Shared batch handling for the reduction-backed oracles."""

from __future__ import annotations

import math

import numpy as np

from ..core import SubVertexSet
from ..oracle import BruteForceOracle, DetectionOracle, Masks

WITNESS_CAP = 10**7


class ReductionOracle(DetectionOracle):
    """Oracle whose single queries run a problem reduction.

    With ``batch="witness"`` a batch is answered from the list of all
    hyperedges, enumerated once on first use, which gives the same answers
    as looping the reduction at a fraction of the cost. The list is only
    built when the tuple space is at most ``WITNESS_CAP``; otherwise, or
    with ``batch="reduction"``, batches loop over :meth:`query`.
    """

    def __init__(self, batch: str = "witness") -> None:
        if batch not in ("witness", "reduction"):
            raise ValueError("batch must be 'witness' or 'reduction'")
        self.batch = batch
        self._witness_oracle: BruteForceOracle | None = None

    def witnesses(self) -> np.ndarray:
        """All hyperedges as an ``(m, k)`` ordinal array."""
        raise NotImplementedError

    def _fast(self) -> BruteForceOracle | None:
        if self.batch != "witness" or math.prod(self.universe.class_sizes) > WITNESS_CAP:
            return None
        if self._witness_oracle is None:
            self._witness_oracle = BruteForceOracle(self.universe, self.witnesses().tolist())
        return self._witness_oracle

    def exact_count(self, U: SubVertexSet | None = None) -> int:
        edges = self.witnesses()
        if U is None:
            return int(edges.shape[0])
        alive = np.ones(edges.shape[0], dtype=bool)
        for c, mask in enumerate(U.masks()):
            alive &= mask[edges[:, c]]
        return int(alive.sum())

    def query_masks(self, masks: Masks) -> np.ndarray:
        fast = self._fast()
        return fast.query_masks(masks) if fast else super().query_masks(masks)

    def extension_answers(self, masks: Masks, h: int) -> np.ndarray:
        fast = self._fast()
        return fast.extension_answers(masks, h) if fast else super().extension_answers(masks, h)

    def extension_answers_all(self, masks: Masks) -> list[np.ndarray]:
        fast = self._fast()
        return fast.extension_answers_all(masks) if fast else super().extension_answers_all(masks)

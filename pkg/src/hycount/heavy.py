"""Heavy-vertex discovery over simple sampling vectors."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    BOT,
    Bot,
    ParamProfile,
    RandomStream,
    SamplingVector,
    SubVertexSet,
    VertexId,
    as_fraction,
    ceil_log2,
)
from .enumeration import find_non_isolated_batch
from .oracle import BudgetedOracle, BudgetExhausted, DetectionOracle, column_sizes

# Repetitions sampled per numpy batch; fixed so results do not depend on memory.
_REPS_PER_CHUNK = 8192


@dataclass(frozen=True)
class Vertices:
    vertices: frozenset[VertexId]


HeavyResult = Vertices | Bot


@functools.lru_cache(maxsize=64)
def _grid(k: int, top: int) -> tuple[np.ndarray, tuple[SamplingVector, ...]]:
    exps = np.array(list(itertools.product(range(top + 1), repeat=k)), dtype=np.int64)
    return exps, tuple(SamplingVector(tuple(e)) for e in exps.tolist())


def _min_exponent_sum(lam: Fraction) -> int:
    """Smallest ``s >= 0`` with ``2**s >= lam``."""
    s = 0
    while Fraction(2**s) < lam:
        s += 1
    return s


def _product_indices(k: int, n: int, lam: Fraction) -> tuple[np.ndarray, tuple[SamplingVector, ...], np.ndarray]:
    exps, vectors = _grid(k, ceil_log2(max(n, 2)))
    keep = np.flatnonzero(exps.sum(axis=1) >= _min_exponent_sum(lam))
    return exps, vectors, keep


def product_vectors(k: int, n: int, lam: Fraction | float | int) -> list[SamplingVector]:
    """Simple vectors with ``w(P) <= 1/lam``, in lexicographic exponent order."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError("lam must be positive")
    _, vectors, keep = _product_indices(k, n, lam)
    return [vectors[i] for i in keep]


def _sample_masks(
    V: SubVertexSet, rep_exps: np.ndarray, gen: np.random.Generator
) -> list[np.ndarray]:
    """Keep each candidate with probability ``2**-j`` via integer thresholds."""
    R = rep_exps.shape[0]
    bits = 8 if rep_exps.max(initial=0) <= 8 else 16 if rep_exps.max() <= 16 else 32
    dtype = {8: np.uint8, 16: np.uint16, 32: np.uint32}[bits]
    masks = []
    for c, (size, cand) in enumerate(zip(V.universe.class_sizes, V.parts)):
        # draw < 2**(bits - j), written as <= so the bound fits the draw dtype
        top = (np.left_shift(1, bits - rep_exps[:, c]) - 1).astype(dtype)
        draws = gen.integers(0, 1 << bits, size=(cand.size, R), dtype=dtype, endpoint=False)
        keep = draws <= top[None, :]
        if cand.size == size:
            masks.append(keep)
        else:
            m = np.zeros((size, R), dtype=bool)
            m[cand] = keep
            masks.append(m)
    return masks


def _discover(
    oracle: DetectionOracle,
    V: SubVertexSet,
    all_exps: np.ndarray,
    profile: ParamProfile,
    rng: RandomStream,
) -> list[np.ndarray]:
    """Run the discovery experiment for every exponent row, batching repetitions.

    Returns per-class ``(len(all_exps), n_c)`` arrays marking each vector's
    output set. Level ``j`` draws its samples from the substream
    ``rng.child("level", j)`` for all vectors still undecided, in row order.
    """
    k = oracle.k
    count = all_exps.shape[0]
    selected = [np.zeros((count, s), dtype=bool) for s in V.universe.class_sizes]
    mu_v = V.measure()
    if mu_v == 0 or count == 0:
        return selected
    r = profile.r_discovery(k)
    q = profile.q_disc(k)
    slack = profile.sampling_slack(k)
    pending = np.arange(count)
    per_chunk = max(1, _REPS_PER_CHUNK // r)
    for j in range(profile.ceil_log_n + 1):
        if pending.size == 0:
            break
        sigma = max(2, math.ceil(2**j * 100 / q))
        gen = rng.child("level", j).generator()
        undecided = []
        for start in range(0, pending.size, per_chunk):
            chunk = pending[start : start + per_chunk]
            rep_exps = np.repeat(all_exps[chunk], r, axis=0)
            masks = _sample_masks(V, rep_exps, gen)
            mu = np.prod(column_sizes(masks).astype(float), axis=1)
            expected = mu_v * np.ldexp(1.0, -rep_exps.sum(axis=1))
            active = np.flatnonzero(mu < expected * slack)
            overflow, hits = find_non_isolated_batch(oracle, [m[:, active] for m in masks], sigma)
            # active reps are sorted, so each vector owns one contiguous run
            owner = active // r
            b = np.bincount(owner[overflow], minlength=chunk.size)
            ok = b <= r * q / 10
            groups, starts = np.unique(owner, return_index=True)
            pick = ok[groups]
            rows = chunk[groups[pick]]
            for c, h in enumerate(hits):
                if groups.size == 0:
                    break
                counts = np.add.reduceat(h.view(np.uint8), starts, axis=1, dtype=np.int32)
                selected[c][rows] = counts.T[pick] >= 3 * r * q / 4
            undecided.append(chunk[~ok])
        pending = np.concatenate(undecided)
    return selected


def _as_vertices(masks: Sequence[np.ndarray]) -> frozenset[VertexId]:
    return frozenset(
        VertexId(c, int(o)) for c, m in enumerate(masks) for o in np.flatnonzero(m)
    )


def discovery_experiment(
    oracle: DetectionOracle,
    V: SubVertexSet,
    P: SamplingVector,
    profile: ParamProfile,
    rng: RandomStream,
) -> frozenset[VertexId]:
    """Vertices whose discovery probability under ``P`` looks large."""
    if P.k != V.k:
        raise ValueError("sampling vector dimension does not match the set")
    exps = np.array([P.exponents], dtype=np.int64)
    return _as_vertices([s[0] for s in _discover(oracle, V, exps, profile, rng)])


def find_heavy(
    oracle: DetectionOracle,
    V: SubVertexSet,
    lam: Fraction | float | int,
    profile: ParamProfile,
    rng: RandomStream,
) -> frozenset[VertexId]:
    """A superset of the ``lam``-heavy vertices with no ``Λ_low``-light ones (whp)."""
    k = oracle.k
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError("lam must be positive")
    exps, _, keep = _product_indices(k, profile.n, profile.lambda_mid(lam, k))
    selected = _discover(oracle, V, exps[keep], profile, rng)
    return _as_vertices([s.any(axis=0) for s in selected])


def find_heavy_bounded(
    oracle: DetectionOracle,
    V: SubVertexSet,
    lam: Fraction | float | int,
    zeta: float,
    profile: ParamProfile,
    rng: RandomStream,
) -> HeavyResult:
    """:func:`find_heavy` under a ``C·ψ·ζ`` query budget and a size cap ``ζ``."""
    if not zeta >= 1:
        raise ValueError("zeta must be at least 1")
    budgeted = BudgetedOracle(oracle, profile.budget(oracle.k, zeta))
    try:
        found = find_heavy(budgeted, V, lam, profile, rng)
    except BudgetExhausted:
        return BOT
    if len(found) > zeta:
        return BOT
    return Vertices(found)

"""The estimator stack, from the median rule up to Hyperedge-Approx."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hycount.core import BOT, ParamProfile, PartitionedUniverse, RandomStream, VertexId, depth
from hycount.counting import (
    TOO_LARGE,
    Context,
    Value,
    count_heavy,
    deg_approx,
    guess_apx,
    hyperedge_approx,
    median_apx,
    median_of,
    recursive_apx,
    run_hyperedge_approx,
)
from hycount.oracle import brute_force_oracle, instrument
from hycount.problems import random_hypergraph

# Practical profile with cheap repetition counts; see the decisions ledger.
FAST = dict(c_r=1, c_d=2)


def fast(n: int, **extra) -> ParamProfile:
    return ParamProfile.practical(n, **{**FAST, **extra})


def planted(m: int, seed: int = 1, parts=(60, 60, 60)):
    h = random_hypergraph(parts, m, seed)
    U = PartitionedUniverse(h.parts)
    return U, brute_force_oracle(U, h.edges)


def degree_instance():
    """(0,0) has degree 200; random edges avoid ordinal 0 of class 0 and ordinal 59."""
    U = PartitionedUniverse((60, 60, 60))
    rng = np.random.default_rng(0)
    edges = [(0, b, c) for b in range(10) for c in range(20)]
    edges += [tuple(int(x) for x in row) for row in rng.integers(1, 59, (300, 3))]
    return U, brute_force_oracle(U, edges)


def shared_instance():
    """(0,0) and (1,0) lie on the same 400 edges; degree sum is 800."""
    U = PartitionedUniverse((20, 20, 400))
    return U, brute_force_oracle(U, [(0, 0, c) for c in range(400)])


class TestMedian:
    @pytest.mark.parametrize(
        "values, expected", [([3, 1, 2], 2), ([5], 5), ([1, 2, 3, 4], 2)]
    )
    def test_examples(self, values, expected):
        assert median_of(values) == expected

    def test_empty(self):
        with pytest.raises(ValueError):
            median_of([])

    @given(st.lists(st.fractions(), min_size=1, max_size=40))
    def test_is_lower_median(self, values):
        med = median_of(values)
        assert sum(v < med for v in values) <= (len(values) - 1) // 2
        assert sum(v <= med for v in values) >= (len(values) + 1) // 2


class TestDegApprox:
    def test_k1(self):
        U = PartitionedUniverse((5,))
        o = brute_force_oracle(U, [(2,)])
        prof = fast(U.n)
        assert deg_approx(o, VertexId(0, 2), Fraction(1), U.full(), 0.25, prof, RandomStream(0)) == 1
        assert deg_approx(o, VertexId(0, 3), Fraction(1), U.full(), 0.25, prof, RandomStream(0)) == 0

    def test_degree_200(self):
        U, o = degree_instance()
        assert o.exact_degree(VertexId(0, 0)) == 200
        prof = fast(U.n)
        hits = sum(
            150 <= deg_approx(o, VertexId(0, 0), Fraction(20), U.full(), 0.25, prof, RandomStream(s)) <= 250
            for s in range(50)
        )
        assert hits >= 45

    def test_isolated(self):
        U, o = degree_instance()
        prof = fast(U.n)
        v = VertexId(1, 59)
        assert o.exact_degree(v) == 0
        hits = sum(
            deg_approx(o, v, Fraction(20), U.full(), 0.25, prof, RandomStream(s)) <= 0.25 * 20
            for s in range(20)
        )
        assert hits >= 18


class TestCountHeavy:
    def test_empty(self):
        U, o = degree_instance()
        assert count_heavy(o, U.full(), set(), Fraction(60), 0.25, fast(U.n), RandomStream(0)) == 0

    def test_single_vertex(self):
        U, o = degree_instance()
        prof = fast(U.n)
        hits = sum(
            100 <= count_heavy(o, U.full(), {VertexId(0, 0)}, Fraction(60), 0.25, prof, RandomStream(s)) <= 300
            for s in range(20)
        )
        assert hits >= 18

    def test_shared_edges_counted_once(self):
        U, o = shared_instance()
        heavy = {VertexId(0, 0), VertexId(1, 0)}
        prof = fast(U.n)
        for s in range(10):
            est = count_heavy(o, U.full(), heavy, Fraction(60), 0.25, prof, RandomStream(s))
            assert 200 <= est <= 600


class TestRecursiveApx:
    def test_no_edges(self):
        U = PartitionedUniverse((10, 10, 10))
        o = brute_force_oracle(U, [])
        assert recursive_apx(o, U.full(), 64, fast(U.n), RandomStream(0)) == Value(Fraction(0))

    def test_base_case_exact(self):
        U = PartitionedUniverse((8, 8, 8))
        o = brute_force_oracle(U, [(0, 0, 0), (1, 1, 1), (2, 3, 4), (5, 5, 5), (7, 6, 5)])
        for s in range(5):
            assert recursive_apx(o, U.full(), 1, fast(U.n), RandomStream(s)) == Value(Fraction(5))

    @pytest.mark.parametrize("lam0", [Fraction(1, 2), 8, 4096, Fraction(10**6, 3)])
    def test_lambda_schedule(self, lam0):
        U, o = planted(300, seed=3, parts=(30, 30, 30))
        trace = []
        ctx = Context(fast(U.n), budgeted=False)
        res = recursive_apx(o, U.full(), lam0, ctx, RandomStream(2), trace=trace)
        assert isinstance(res, Value)
        # only the top-level records: nested Deg-Approx calls do not share this list
        assert [r.level for r in trace] == list(range(len(trace)))
        for r in trace:
            assert r.lam == Fraction(lam0) / 2 ** (3 * r.level)
        assert len(trace) <= depth(lam0, 3) + 1
        assert trace[-1].branch == "base"

    def test_bot_propagates(self):
        # ζ just above 1 with several non-isolated vertices forces the size cap
        U, o = planted(200, seed=5, parts=(20, 20, 20))
        prof = fast(U.n)
        prof = fast(U.n, c_zeta=1.0001 / (prof.zeta(3) / prof.factors["c_zeta"]))
        assert 1 <= prof.zeta(3) < 2
        trace = []
        ctx = Context(prof, trace=trace)
        for lam in (1, 64, 4096):
            trace.clear()
            assert recursive_apx(o, U.full(), lam, ctx, RandomStream(0)) is BOT
            assert trace[-1].branch == "bot"
        assert ctx.diagnostics.heavy_bot + ctx.diagnostics.base_overflow >= 3


class TestMedianApx:
    def test_forced_bot(self):
        U, o = planted(200, seed=5, parts=(20, 20, 20))
        prof = fast(U.n)
        prof = fast(U.n, c_zeta=1.0001 / (prof.zeta(3) / prof.factors["c_zeta"]))
        assert median_apx(o, U.full(), 100, 0.25, prof, RandomStream(0)) is BOT

    def test_no_edges(self):
        U = PartitionedUniverse((10, 10, 10))
        o = brute_force_oracle(U, [])
        assert median_apx(o, U.full(), 50, 0.25, fast(U.n), RandomStream(0)) == Value(Fraction(0))

    @pytest.mark.slow
    def test_planted_500(self):
        U, o = planted(500)
        prof = fast(U.n)
        lo, hi = 500 * (1 - 0.125) - 200 * 0.25 / 8, 500 * (1 + 0.125) + 200 * 0.25 / 8
        hits = 0
        for s in range(30):
            res = median_apx(o, U.full(), 200, 0.25, prof, RandomStream(s))
            hits += isinstance(res, Value) and lo <= res.value <= hi
        assert hits >= 27


class TestGuessApx:
    def test_no_edges(self):
        U = PartitionedUniverse((10, 10, 10))
        o = brute_force_oracle(U, [])
        for L in (1, 7, 1000):
            assert guess_apx(o, U.full(), L, 0.25, fast(U.n), RandomStream(0)) is TOO_LARGE

    @pytest.mark.slow
    def test_planted_400(self):
        U, o = planted(400, seed=2)
        prof = fast(U.n)
        hits = 0
        for s in range(30):
            res = guess_apx(o, U.full(), 100, 0.25, prof, RandomStream(s))
            hits += isinstance(res, Value) and 300 <= res.value <= 500
        assert hits >= 27

    def test_far_too_large(self):
        U, o = planted(400, seed=2)
        prof = fast(U.n)
        hits = sum(guess_apx(o, U.full(), 4000, 0.25, prof, RandomStream(s)) is TOO_LARGE for s in range(10))
        assert hits >= 9


class TestHyperedgeApprox:
    def test_no_edges(self):
        U = PartitionedUniverse((6, 6, 6))
        o = brute_force_oracle(U, [])
        assert hyperedge_approx(o, U.full(), 0.25, fast(U.n), RandomStream(0)) == 0

    def test_empty_set(self):
        U = PartitionedUniverse((6, 0, 6))
        o = brute_force_oracle(U, [])
        res = run_hyperedge_approx(o, U.full(), 0.25, fast(U.n), RandomStream(0))
        assert res.estimate == 0 and res.terminal_L is None

    def test_single_edge(self):
        U = PartitionedUniverse((4, 4, 4))
        o = brute_force_oracle(U, [(1, 2, 3)])
        prof = fast(U.n)
        hits = sum(
            0.75 <= hyperedge_approx(o, U.full(), 0.25, prof, RandomStream(s)) <= 1.25 for s in range(50)
        )
        assert hits >= 45

    def test_eps_validation(self):
        U = PartitionedUniverse((4, 4))
        with pytest.raises(ValueError):
            hyperedge_approx(brute_force_oracle(U, []), U.full(), 0, fast(U.n), RandomStream(0))

    def test_deterministic_transcript(self):
        U, o = planted(150, seed=4, parts=(20, 20, 20))
        runs = []
        for _ in range(2):
            wrapped, stats = instrument(o)
            trace = []
            res = run_hyperedge_approx(wrapped, U.full(), 0.25, fast(U.n), RandomStream(11), trace=trace)
            runs.append((res.estimate, res.terminal_index, stats.total_queries, stats.measure_log, trace))
        assert runs[0] == runs[1]

    def test_measure_discipline(self):
        U, o = planted(150, seed=4, parts=(20, 20, 20))
        prof = fast(U.n)
        wrapped, stats = instrument(o, log_measures=False)
        res = run_hyperedge_approx(wrapped, U.full(), 0.25, prof, RandomStream(3))
        assert stats.max_measure <= prof.measure_bound(3, U.full().measure(), res.terminal_L)

    @pytest.mark.parametrize("seed", range(6))
    def test_coupling(self, seed):
        U, o = planted(120, seed=seed, parts=(16, 16, 16))
        prof = fast(U.n)
        a = run_hyperedge_approx(o, U.full(), 0.25, prof, RandomStream(seed))
        b = run_hyperedge_approx(o, U.full(), 0.25, prof, RandomStream(seed), budgeted=False)
        if a.diagnostics.heavy_bot == 0 and a.diagnostics.base_overflow == 0:
            assert a.estimate == b.estimate

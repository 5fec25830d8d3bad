"""Simple-vector grid, discovery experiments and Find-Heavy."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hycount.core import BOT, ParamProfile, PartitionedUniverse, RandomStream, SamplingVector, VertexId
from hycount.heavy import (
    Vertices,
    discovery_experiment,
    find_heavy,
    find_heavy_bounded,
    product_vectors,
)
from hycount.oracle import brute_force_oracle, instrument


def two_heavy_instance():
    """k = 2: (0,0) and (0,1) each own 150 private class-1 partners."""
    U = PartitionedUniverse((300, 300))
    edges = [(0, b) for b in range(150)] + [(1, b) for b in range(150, 300)]
    return U, brute_force_oracle(U, edges)


class TestProductVectors:
    def test_k1(self):
        assert [P.exponents for P in product_vectors(1, 4, 2)] == [(1,), (2,)]

    def test_all_when_lambda_one(self):
        assert len(product_vectors(2, 2, 1)) == 4

    def test_single_vector(self):
        assert [P.exponents for P in product_vectors(2, 2, 4)] == [(1, 1)]

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            product_vectors(2, 4, 0)

    @given(st.integers(1, 3), st.integers(2, 40), st.fractions(min_value=Fraction(1, 8), max_value=4096))
    def test_is_filter_of_grid(self, k, n, lam):
        top = math.ceil(math.log2(n))
        grid = [
            SamplingVector(e)
            for e in itertools.product(range(top + 1), repeat=k)
            if Fraction(1, 2 ** sum(e)) <= 1 / lam
        ]
        got = product_vectors(k, n, lam)
        assert got == grid
        assert all(P.is_simple(n) and P.weight() <= 1 / lam for P in got)
        assert len(got) <= (math.log2(n) + 2) ** k


class TestDiscovery:
    def test_no_edges(self):
        U = PartitionedUniverse((8, 8))
        o = brute_force_oracle(U, [])
        prof = ParamProfile.practical(U.n)
        for P in product_vectors(2, U.n, 1):
            assert discovery_experiment(o, U.full(), P, prof, RandomStream(0)) == frozenset()

    def test_star_vector(self, star_instance):
        # w(P) = 1/512 is about 1/d for d = 400; classes 1 and 2 are sampled
        U, _, o = star_instance
        prof = ParamProfile.practical(U.n)
        P = SamplingVector((0, 4, 5))
        heavy = light = 0
        for seed in range(50):
            out = discovery_experiment(o, U.full(), P, prof, RandomStream(seed))
            assert out <= set(U.full().vertices())
            heavy += VertexId(0, 0) in out
            light += VertexId(0, 7) in out
        assert heavy >= 45
        assert light <= 5

    def test_measure_discipline(self, star_instance):
        U, _, o = star_instance
        prof = ParamProfile.practical(U.n)
        P = SamplingVector((2, 3, 3))
        wrapped, stats = instrument(o)
        discovery_experiment(wrapped, U.full(), P, prof, RandomStream(1))
        bound = U.full().measure() * float(P.weight()) * prof.sampling_slack(3)
        assert stats.total_queries > 0
        assert stats.max_measure <= bound

    def test_deterministic(self, star_instance):
        U, _, o = star_instance
        prof = ParamProfile.practical(U.n, c_d=2)
        P = SamplingVector((1, 3, 3))
        runs = [discovery_experiment(o, U.full(), P, prof, RandomStream(9)) for _ in range(2)]
        assert runs[0] == runs[1]


class TestFindHeavy:
    def test_no_edges(self):
        U = PartitionedUniverse((10, 10, 10))
        o = brute_force_oracle(U, [])
        prof = ParamProfile.practical(U.n)
        assert find_heavy(o, U.full(), 4, prof, RandomStream(0)) == frozenset()
        assert find_heavy_bounded(o, U.full(), 4, 10**4, prof, RandomStream(0)) == Vertices(frozenset())

    def test_two_heavy_exact(self):
        U, o = two_heavy_instance()
        prof = ParamProfile.practical(U.n)
        hits = sum(
            find_heavy(o, U.full(), 150, prof, RandomStream(s)) == {VertexId(0, 0), VertexId(0, 1)}
            for s in range(10)
        )
        assert hits >= 9

    def test_bounded_size_cap(self):
        # a large budget multiplier isolates the size cap from the query budget
        U, o = two_heavy_instance()
        prof = ParamProfile.practical(U.n, C=10**6)
        bots = exact = 0
        for s in range(10):
            bots += find_heavy_bounded(o, U.full(), 150, 1, prof, RandomStream(s)) is BOT
            res = find_heavy_bounded(o, U.full(), 150, 100, prof, RandomStream(s))
            exact += res == Vertices(frozenset({VertexId(0, 0), VertexId(0, 1)}))
        assert bots >= 9 and exact >= 9

    def test_bounded_budget_and_size(self):
        U, o = two_heavy_instance()
        prof = ParamProfile.practical(U.n)
        for zeta in (1, 5, 100, 10**6):
            wrapped, stats = instrument(o, log_measures=False)
            res = find_heavy_bounded(wrapped, U.full(), 150, zeta, prof, RandomStream(2))
            assert stats.total_queries <= prof.budget(2, zeta)
            if res is not BOT:
                assert len(res.vertices) <= zeta

    def test_bounded_matches_unbounded_when_it_succeeds(self):
        U, o = two_heavy_instance()
        prof = ParamProfile.practical(U.n, c_d=2)
        free = find_heavy(o, U.full(), 150, prof, RandomStream(4))
        capped = find_heavy_bounded(o, U.full(), 150, 10**7, prof, RandomStream(4))
        assert capped == Vertices(free)

    def test_zeta_validation(self):
        U = PartitionedUniverse((2,))
        with pytest.raises(ValueError):
            find_heavy_bounded(brute_force_oracle(U, []), U.full(), 1, 0, ParamProfile.practical(2), RandomStream(0))

"""Shared instance builders for the test suite."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np
import pytest
from hypothesis import strategies as st

from hycount.core import PartitionedUniverse, SubVertexSet
from hycount.oracle import brute_force_oracle
from hycount.problems import KPartiteGraph, KSumInstance, SimpleGraph


def random_edges(rng: np.random.Generator, sizes: Sequence[int], m: int) -> list[tuple[int, ...]]:
    """``m`` distinct uniform hyperedges (fewer if the tuple space is smaller)."""
    space = int(np.prod(sizes))
    m = min(m, space)
    flat = rng.choice(space, size=m, replace=False)
    return [tuple(int(x) for x in t) for t in zip(*np.unravel_index(flat, tuple(sizes)))]


def random_subset(rng: np.random.Generator, universe: PartitionedUniverse, p: float = 0.5) -> SubVertexSet:
    return SubVertexSet.from_masks(universe, [rng.random(s) < p for s in universe.class_sizes])


def all_subsets(universe: PartitionedUniverse):
    """Every classwise subset of a tiny universe."""
    per_class = [
        [np.array(c, dtype=np.int64) for r in range(s + 1) for c in itertools.combinations(range(s), r)]
        for s in universe.class_sizes
    ]
    for parts in itertools.product(*per_class):
        yield SubVertexSet(universe, list(parts))


def scan_contains(edges, U: SubVertexSet) -> bool:
    """Direct containment scan, independent of the oracle code."""
    return any(all(e[c] in set(U.parts[c].tolist()) for c in range(U.k)) for e in edges)


def scan_count(edges, U: SubVertexSet) -> int:
    members = [set(p.tolist()) for p in U.parts]
    return sum(1 for e in set(map(tuple, edges)) if all(e[c] in members[c] for c in range(U.k)))


def scan_non_isolated(edges, U: SubVertexSet) -> set[tuple[int, int]]:
    members = [set(p.tolist()) for p in U.parts]
    out = set()
    for e in edges:
        if all(e[c] in members[c] for c in range(U.k)):
            out.update((c, e[c]) for c in range(U.k))
    return out


# Independent scans written directly from the problem definitions.


def scan_clique(G: KPartiteGraph, U: SubVertexSet) -> list[tuple[int, ...]]:
    out = []
    for t in itertools.product(*[p.tolist() for p in U.parts]):
        glob = [G.index(c, o) for c, o in enumerate(t)]
        if all(G.adj[a, b] for a, b in itertools.combinations(glob, 2)):
            out.append(t)
    return out


def scan_ds(H: SimpleGraph, U: SubVertexSet) -> list[tuple[int, ...]]:
    """Tuples of distinct original vertices that dominate ``H`` (closed neighbourhoods)."""
    out = []
    for t in itertools.product(*[p.tolist() for p in U.parts]):
        if len(set(t)) < len(t):
            continue
        if all(y in t or any(H.adj[x, y] for x in t) for y in range(H.n)):
            out.append(t)
    return out


def scan_ksum(inst: KSumInstance, U: SubVertexSet) -> list[tuple[int, ...]]:
    return [
        t
        for t in itertools.product(*[p.tolist() for p in U.parts])
        if sum(inst.lists[c][i] for c, i in enumerate(t)) == 0
    ]


def scan_cliques(H: SimpleGraph, k: int) -> int:
    return sum(
        all(H.adj[u, v] for u, v in itertools.combinations(S, 2))
        for S in itertools.combinations(range(H.n), k)
    )


def scan_ds_count(H: SimpleGraph, k: int) -> int:
    return sum(
        all(y in S or any(H.adj[x, y] for x in S) for y in range(H.n))
        for S in itertools.combinations(range(H.n), k)
    )


@st.composite
def hypergraphs(draw, max_k: int = 4, max_size: int = 6, max_edges: int = 30):
    """``(universe, edges)`` with small class sizes."""
    k = draw(st.integers(1, max_k))
    sizes = tuple(draw(st.lists(st.integers(1, max_size), min_size=k, max_size=k)))
    edge = st.tuples(*[st.integers(0, s - 1) for s in sizes])
    edges = draw(st.lists(edge, max_size=max_edges, unique=True))
    return PartitionedUniverse(sizes), edges


@pytest.fixture
def star_instance():
    """One class-0 vertex of degree 400 plus 199 degree-1 class-0 vertices."""
    universe = PartitionedUniverse((200, 200, 200))
    edges = [(0, a, a) for a in range(200)] + [(0, a, (a + 1) % 200) for a in range(200)]
    edges += [(i, i, i) for i in range(1, 200)]
    return universe, edges, brute_force_oracle(universe, edges)


# One summary line per acceptance criterion, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

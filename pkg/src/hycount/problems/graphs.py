"""Explicit graphs used by the reductions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=bool, order="C")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """Undirected loop-free graph on vertices ``0..n-1``."""

    n: int
    adj: np.ndarray

    def __post_init__(self) -> None:
        adj = np.asarray(self.adj, dtype=bool)
        if adj.shape != (self.n, self.n):
            raise ValueError("adjacency must be n x n")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        object.__setattr__(self, "adj", _frozen(adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        if n < 0:
            raise ValueError("n must be nonnegative")
        adj = np.zeros((n, n), dtype=bool)
        for e in edges:
            u, v = (int(x) for x in e)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) is out of range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u, v] = adj[v, u] = True
        return cls(n, adj)

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self.adj, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def closed_neighborhoods(self) -> np.ndarray:
        """``N[u]`` as rows: ``adj`` with the diagonal set."""
        return self.adj | np.eye(self.n, dtype=bool)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimpleGraph) and self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))


@dataclass(frozen=True, eq=False)
class KPartiteGraph:
    """Graph on ``k`` labelled classes; vertex ``(c, o)`` sits at ``offsets[c] + o``."""

    class_sizes: tuple[int, ...]
    adj: np.ndarray

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.class_sizes)
        if not sizes or any(s < 0 for s in sizes):
            raise ValueError("class sizes must be nonnegative and at least one class is needed")
        object.__setattr__(self, "class_sizes", sizes)
        total = sum(sizes)
        adj = np.asarray(self.adj, dtype=bool)
        if adj.shape != (total, total):
            raise ValueError("adjacency must be N x N for N the total class size")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        object.__setattr__(self, "adj", _frozen(adj))

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self.class_sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def index(self, c: int, o: int) -> int:
        if not (0 <= c < self.k and 0 <= o < self.class_sizes[c]):
            raise ValueError(f"vertex ({c}, {o}) is out of range")
        return self.offsets[c] + o

    def block(self, a: int, b: int) -> np.ndarray:
        """Adjacency between class ``a`` (rows) and class ``b`` (columns)."""
        oa, ob = self.offsets[a], self.offsets[b]
        return self.adj[oa : oa + self.class_sizes[a], ob : ob + self.class_sizes[b]]

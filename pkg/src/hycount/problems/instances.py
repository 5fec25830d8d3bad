"""JSON instance files and seeded generators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from ..core import PartitionedUniverse
from .graphs import SimpleGraph


class InstanceError(ValueError):
    """Malformed or inconsistent instance data."""


@dataclass(frozen=True, eq=False)
class HypergraphInstance:
    """Explicit k-partite hypergraph; edge entries are per-class ordinals."""

    parts: tuple[int, ...]
    edges: np.ndarray

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def universe(self) -> PartitionedUniverse:
        return PartitionedUniverse(self.parts)


@dataclass(frozen=True)
class KSumValues:
    """Uncolored k-sum input: one list, the tuple length ``k`` and the bound."""

    values: tuple[int, ...]
    k: int
    bound: int


Instance = SimpleGraph | HypergraphInstance | KSumValues


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InstanceError(f"{what} must be an integer, got {x!r}")
    return x


def instance_from_dict(d: dict) -> Instance:
    if not isinstance(d, dict) or "type" not in d:
        raise InstanceError("instance must be a JSON object with a 'type' field")
    kind = d["type"]
    try:
        if kind == "graph":
            n = _int(d["n"], "n")
            edges = [[_int(x, "edge entry") for x in e] for e in d["edges"]]
            if any(len(e) != 2 for e in edges):
                raise InstanceError("graph edges must have two endpoints")
            return SimpleGraph.from_edges(n, edges)
        if kind == "hypergraph":
            k = _int(d["k"], "k")
            parts = tuple(_int(p, "class size") for p in d["parts"])
            if len(parts) != k or k < 1 or any(p < 0 for p in parts):
                raise InstanceError("'parts' must list k nonnegative class sizes")
            edges = [[_int(x, "edge entry") for x in e] for e in d["edges"]]
            for e in edges:
                if len(e) != k or any(not 0 <= o < parts[c] for c, o in enumerate(e)):
                    raise InstanceError(f"edge {e} does not fit the classes {list(parts)}")
            arr = np.unique(np.array(edges, dtype=np.int64).reshape(-1, k), axis=0)
            if arr.shape[0] != len(edges):
                raise InstanceError("hypergraph edges must be distinct")
            arr.setflags(write=False)
            return HypergraphInstance(parts, arr)
        if kind == "ksum":
            k = _int(d["k"], "k")
            bound = _int(d["bound"], "bound")
            values = tuple(_int(v, "value") for v in d["values"])
            if k < 1 or bound < 0:
                raise InstanceError("k must be positive and bound nonnegative")
            if any(abs(v) > bound for v in values):
                raise InstanceError("a value exceeds the declared bound")
            return KSumValues(values, k, bound)
    except KeyError as exc:
        raise InstanceError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(str(exc)) from None
    raise InstanceError(f"unknown instance type {kind!r}")


def instance_to_dict(inst: Instance) -> dict:
    if isinstance(inst, SimpleGraph):
        return {"type": "graph", "n": inst.n, "edges": [list(e) for e in inst.edges()]}
    if isinstance(inst, HypergraphInstance):
        return {"type": "hypergraph", "k": inst.k, "parts": list(inst.parts), "edges": inst.edges.tolist()}
    if isinstance(inst, KSumValues):
        return {"type": "ksum", "k": inst.k, "values": list(inst.values), "bound": inst.bound}
    raise TypeError(f"not an instance: {type(inst).__name__}")


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=True) + "\n"


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst))


def load_instance(path: str | Path) -> Instance:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None
    return instance_from_dict(data)


# Generators


def random_graph(n: int, density: float, seed: int) -> SimpleGraph:
    """``G(n, p)``."""
    if n < 0 or not 0 <= density <= 1:
        raise ValueError("need n >= 0 and 0 <= density <= 1")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < density, 1)
    return SimpleGraph(n, upper | upper.T)


def planted_clique_graph(n: int, k: int, cliques: int, density: float, seed: int) -> SimpleGraph:
    """``G(n, p)`` plus ``cliques`` random ``k``-sets made complete."""
    if k < 1 or k > n:
        raise ValueError("need 1 <= k <= n")
    g = random_graph(n, density, seed)
    adj = np.array(g.adj)
    rng = np.random.default_rng([seed, 1])
    for _ in range(cliques):
        S = rng.choice(n, size=k, replace=False)
        adj[np.ix_(S, S)] = True
    np.fill_diagonal(adj, False)
    return SimpleGraph(n, adj)


def random_hypergraph(parts: Sequence[int], edges: int, seed: int) -> HypergraphInstance:
    """Exactly ``edges`` distinct hyperedges drawn uniformly from the tuple space."""
    parts = tuple(int(p) for p in parts)
    space = math.prod(parts)
    if edges < 0 or edges > space:
        raise ValueError(f"cannot place {edges} distinct edges in a tuple space of {space}")
    rng = np.random.default_rng(seed)
    if space <= 10**7:
        flat = np.sort(rng.choice(space, size=edges, replace=False))
        arr = np.stack(np.unravel_index(flat, parts), axis=1).astype(np.int64)
    else:
        chosen: set[tuple[int, ...]] = set()
        while len(chosen) < edges:
            chosen.add(tuple(int(rng.integers(p)) for p in parts))
        arr = np.array(sorted(chosen), dtype=np.int64)
    arr = arr.reshape(-1, len(parts))
    arr.setflags(write=False)
    return HypergraphInstance(parts, arr)


def random_ksum(n: int, k: int, bound: int, planted: int, seed: int) -> KSumValues:
    """``n`` values in ``[-bound, bound]`` that include ``planted`` zero-sum groups."""
    if k < 1 or bound < 0 or planted < 0 or planted * k > n:
        raise ValueError("need k >= 1, bound >= 0 and planted * k <= n")
    rng = np.random.default_rng(seed)
    values = [int(v) for v in rng.integers(-bound, bound, size=n - planted * k, endpoint=True)]
    step = bound // k
    for _ in range(planted):
        head = [int(v) for v in rng.integers(-step, step, size=k - 1, endpoint=True)]
        values.extend(head + [-sum(head)])
    order = rng.permutation(len(values))
    return KSumValues(tuple(values[i] for i in order), k, bound)

"""Universe, vertex subsets, sampling vectors and the parameter profile.

Vertices are identified by ``(class_index, ordinal)`` pairs. A
:class:`SubVertexSet` stores one sorted ordinal array per color class, so
all classwise set operations stay local to a class.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

Rational = Fraction


class VertexId(NamedTuple):
    part: int
    ordinal: int


def ceil_log2(n: int) -> int:
    """Return ``ceil(log2 n)`` for ``n >= 1`` using integer bit length."""
    if n < 1:
        raise ValueError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


def as_fraction(x: float | int | Fraction) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class PartitionedUniverse:
    """The k color classes of an implicit hypergraph, described by size."""

    class_sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.class_sizes)
        if len(sizes) < 1:
            raise ValueError("a universe needs at least one class")
        if any(s < 0 for s in sizes):
            raise ValueError("class sizes must be nonnegative")
        object.__setattr__(self, "class_sizes", sizes)

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    def contains(self, v: VertexId) -> bool:
        c, o = v
        return 0 <= c < self.k and 0 <= o < self.class_sizes[c]

    def without_class(self, c: int) -> "PartitionedUniverse":
        if self.k < 2:
            raise ValueError("cannot remove the last class")
        return PartitionedUniverse(self.class_sizes[:c] + self.class_sizes[c + 1 :])

    def full(self) -> "SubVertexSet":
        return SubVertexSet.full(self)


def _frozen_array(values: Iterable[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64).reshape(-1)
    arr = np.array(arr, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


class SubVertexSet:
    """A classwise subset ``U`` of a :class:`PartitionedUniverse`.

    Each class holds a strictly increasing ``int64`` array of ordinals. The
    object is immutable; all operations return new sets.
    """

    __slots__ = ("universe", "parts", "_hash")

    def __init__(
        self,
        universe: PartitionedUniverse,
        parts: Sequence[Iterable[int] | np.ndarray],
        *,
        validate: bool = True,
    ) -> None:
        if len(parts) != universe.k:
            raise ValueError(f"expected {universe.k} class lists, got {len(parts)}")
        arrays = tuple(_frozen_array(p) for p in parts)
        if validate:
            for c, arr in enumerate(arrays):
                if arr.size == 0:
                    continue
                if np.any(np.diff(arr) <= 0):
                    raise ValueError(f"class {c} list is not strictly increasing")
                if arr[0] < 0 or arr[-1] >= universe.class_sizes[c]:
                    raise ValueError(f"class {c} has an ordinal outside the universe")
        self.universe = universe
        self.parts = arrays
        self._hash: int | None = None

    @classmethod
    def full(cls, universe: PartitionedUniverse) -> "SubVertexSet":
        return cls(universe, [np.arange(s) for s in universe.class_sizes], validate=False)

    @classmethod
    def empty(cls, universe: PartitionedUniverse) -> "SubVertexSet":
        return cls(universe, [()] * universe.k, validate=False)

    @classmethod
    def from_vertices(
        cls, universe: PartitionedUniverse, vertices: Iterable[VertexId | tuple[int, int]]
    ) -> "SubVertexSet":
        buckets: list[set[int]] = [set() for _ in range(universe.k)]
        for c, o in vertices:
            if not universe.contains(VertexId(c, o)):
                raise ValueError(f"vertex {(c, o)} outside the universe")
            buckets[c].add(int(o))
        return cls(universe, [sorted(b) for b in buckets], validate=False)

    @classmethod
    def from_masks(
        cls, universe: PartitionedUniverse, masks: Sequence[np.ndarray]
    ) -> "SubVertexSet":
        return cls(universe, [np.flatnonzero(m) for m in masks], validate=False)

    @property
    def k(self) -> int:
        return self.universe.k

    def sizes(self) -> tuple[int, ...]:
        return tuple(int(p.size) for p in self.parts)

    def measure(self) -> int:
        return measure(self)

    def __len__(self) -> int:
        return sum(int(p.size) for p in self.parts)

    def __contains__(self, v: object) -> bool:
        try:
            c, o = v  # type: ignore[misc]
        except (TypeError, ValueError):
            return False
        if not 0 <= c < self.k:
            return False
        arr = self.parts[c]
        i = int(np.searchsorted(arr, o))
        return i < arr.size and int(arr[i]) == o

    def vertices(self) -> Iterator[VertexId]:
        for c, arr in enumerate(self.parts):
            for o in arr.tolist():
                yield VertexId(c, o)

    def masks(self) -> tuple[np.ndarray, ...]:
        out = []
        for size, arr in zip(self.universe.class_sizes, self.parts):
            m = np.zeros(size, dtype=bool)
            m[arr] = True
            out.append(m)
        return tuple(out)

    def with_class(self, c: int, ordinals: Iterable[int] | np.ndarray) -> "SubVertexSet":
        parts = list(self.parts)
        parts[c] = np.asarray(ordinals, dtype=np.int64)
        return SubVertexSet(self.universe, parts, validate=False)

    def without(self, vertices: Iterable[VertexId | tuple[int, int]]) -> "SubVertexSet":
        drop: list[list[int]] = [[] for _ in range(self.k)]
        for c, o in vertices:
            drop[c].append(o)
        parts = [
            arr if not d else arr[~np.isin(arr, d)] for arr, d in zip(self.parts, drop)
        ]
        return SubVertexSet(self.universe, parts, validate=False)

    def restrict_to(self, vertices: Iterable[VertexId | tuple[int, int]]) -> "SubVertexSet":
        keep: list[list[int]] = [[] for _ in range(self.k)]
        for c, o in vertices:
            keep[c].append(o)
        parts = [arr[np.isin(arr, kp)] for arr, kp in zip(self.parts, keep)]
        return SubVertexSet(self.universe, parts, validate=False)

    def drop_class(self, c: int) -> "SubVertexSet":
        """Project onto the universe with class ``c`` removed."""
        parts = self.parts[:c] + self.parts[c + 1 :]
        return SubVertexSet(self.universe.without_class(c), parts, validate=False)

    def insert_vertex(self, v: VertexId, universe: PartitionedUniverse) -> "SubVertexSet":
        """Inverse of :meth:`drop_class`: add class ``v.part`` holding only ``v``."""
        c, o = v
        parts = self.parts[:c] + (np.array([o], dtype=np.int64),) + self.parts[c:]
        return SubVertexSet(universe, parts, validate=False)

    def issubset(self, other: "SubVertexSet") -> bool:
        return all(
            bool(np.all(np.isin(a, b, assume_unique=True))) for a, b in zip(self.parts, other.parts)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubVertexSet):
            return NotImplemented
        return self.universe == other.universe and all(
            np.array_equal(a, b) for a, b in zip(self.parts, other.parts)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.universe, tuple(tuple(p.tolist()) for p in self.parts)))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(str(p.tolist()) for p in self.parts)
        return f"SubVertexSet({inner})"


def measure(U: SubVertexSet) -> int:
    """Query measure: the product of the per-class sizes."""
    out = 1
    for p in U.parts:
        out *= int(p.size)
        if out == 0:
            return 0
    return out


@dataclass(frozen=True)
class SamplingVector:
    """Per-class sampling probabilities ``2**-j``."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(j) for j in self.exponents)
        if any(j < 0 for j in exps):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "exponents", exps)

    @property
    def k(self) -> int:
        return len(self.exponents)

    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, 2**j) for j in self.exponents)

    def weight(self) -> Fraction:
        return Fraction(1, 2 ** sum(self.exponents))

    def is_simple(self, n: int) -> bool:
        cap = ceil_log2(max(n, 2))
        return all(j <= cap for j in self.exponents)


def sample_subset(U: SubVertexSet, P: SamplingVector, rng: np.random.Generator) -> SubVertexSet:
    """Keep each vertex of class ``i`` independently with probability ``2**-j_i``."""
    if P.k != U.k:
        raise ValueError("sampling vector dimension does not match the set")
    parts = []
    for arr, j in zip(U.parts, P.exponents):
        keep = rng.random(arr.size) < 2.0**-j
        parts.append(arr[keep])
    return SubVertexSet(U.universe, parts, validate=False)


def sample_half(U: SubVertexSet, rng: np.random.Generator) -> SubVertexSet:
    return sample_subset(U, SamplingVector((1,) * U.k), rng)


def depth(lam: Fraction | int | float, k: int) -> int:
    """Smallest ``d >= 0`` with ``2**(k*d) >= lam``."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError("depth needs a positive threshold")
    d = 0
    while Fraction(2 ** (k * d)) < lam:
        d += 1
    return d


def _label_key(label: object) -> int:
    if isinstance(label, bool):
        return int(label)
    if isinstance(label, (int, np.integer)):
        return int(label) & 0xFFFFFFFF
    return zlib.crc32(str(label).encode("utf-8"))


@dataclass(frozen=True)
class RandomStream:
    """A seed plus a path of labels; children are independent substreams.

    The path is fed to :class:`numpy.random.SeedSequence` as its spawn key,
    so ``stream.child("rep", 3)`` is reproducible and independent of any
    other label path.
    """

    seed: int
    path: tuple[int, ...] = ()

    def child(self, *labels: object) -> "RandomStream":
        return RandomStream(self.seed, self.path + tuple(_label_key(x) for x in labels))

    def generator(self) -> np.random.Generator:
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.path))
        )


FACTOR_NAMES = ("c_g", "c_zeta", "c_psi", "c_r", "c_Q", "c_d", "C")

PRACTICAL_DEFAULTS: Mapping[str, float] = {
    "c_g": 4.0,
    "c_zeta": 8.0,
    "c_psi": 8.0,
    "c_r": 8.0,
    "c_Q": 8.0,
    "c_d": 8.0,
    "C": 1.0,
}

FACTOR_ALIASES = {"c_ζ": "c_zeta", "c_ψ": "c_psi", "c_q": "c_Q"}


@dataclass(frozen=True)
class ParamProfile:
    """Every framework constant, in ``faithful`` or ``practical`` mode.

    ``n`` is the total vertex count of the top-level universe and stays
    frozen through the recursion. Quantities that depend on the dimension
    take ``k`` as an argument, because pinned oracles lower it.
    """

    mode: str
    eps: float
    n: int
    factors: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode not in ("faithful", "practical"):
            raise ValueError(f"unknown profile mode {self.mode!r}")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        object.__setattr__(self, "eps", min(float(self.eps), 0.25))
        merged = dict(PRACTICAL_DEFAULTS)
        for name, value in dict(self.factors).items():
            name = FACTOR_ALIASES.get(name, name)
            if name not in merged:
                raise ValueError(f"unknown profile factor {name!r}")
            value = float(value)
            if not value > 0:
                raise ValueError(f"profile factor {name} must be positive")
            merged[name] = value
        object.__setattr__(self, "factors", merged)
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @classmethod
    def practical(cls, n: int, eps: float = 0.25, **factors: float) -> "ParamProfile":
        return cls("practical", eps, n, factors)

    @classmethod
    def faithful(cls, n: int, eps: float = 0.25) -> "ParamProfile":
        return cls("faithful", eps, n, {})

    def with_eps(self, eps: float) -> "ParamProfile":
        return replace(self, eps=eps)

    @property
    def faithful_mode(self) -> bool:
        return self.mode == "faithful"

    @property
    def log_n(self) -> float:
        return math.log2(max(self.n, 2))

    @property
    def ceil_log_n(self) -> int:
        return ceil_log2(max(self.n, 2))

    @property
    def eps_prime(self) -> Fraction:
        return as_fraction(min(1.0, self.eps) / (4.0 * self.log_n))

    def Q(self, k: int) -> float:
        if self.faithful_mode:
            return 5 * k * 2**k * self.log_n**3
        return self.factors["c_Q"] * k * self.log_n

    def g(self, k: int) -> float:
        if self.faithful_mode:
            return (k * math.log2(4 * max(self.n, 2))) ** (k * k)
        return self.factors["c_g"]

    def rho(self, k: int) -> float:
        return self.Q(k) / float(self.eps_prime) ** 2

    def zeta(self, k: int) -> float:
        ep2 = float(self.eps_prime) ** 2
        if self.faithful_mode:
            return k * self.g(k) * (self.Q(k) / ep2) * self.log_n**4
        return self.factors["c_zeta"] * k * self.log_n**2 / ep2

    def psi(self, k: int) -> float:
        if self.faithful_mode:
            return 4**k * k * k * max(math.log2(k), 1.0) * self.log_n ** (k + 2)
        return self.factors["c_psi"] * self.log_n

    def xi(self, k: int) -> float:
        return 4**k * self.g(k)

    def lambda_mid(self, lam: Fraction, k: int) -> Fraction:
        return as_fraction(lam) / as_fraction(self.g(k))

    def lambda_low(self, lam: Fraction, k: int) -> Fraction:
        return self.lambda_mid(lam, k) / 4**k

    def q_disc(self, k: int) -> float:
        return (1.0 - 1.0 / math.e) ** k

    @property
    def q_sample(self) -> Fraction:
        return Fraction(1, 2)

    @property
    def r_median(self) -> int:
        if self.faithful_mode:
            return math.ceil(400 * self.log_n)
        return max(1, math.ceil(self.factors["c_r"] * self.log_n))

    def r_discovery(self, k: int) -> int:
        if self.faithful_mode:
            return math.ceil(600 * self.log_n / self.q_disc(k))
        return max(1, math.ceil(self.factors["c_d"] * self.log_n))

    def budget(self, k: int, zeta: float | None = None) -> float:
        z = self.zeta(k) if zeta is None else zeta
        return self.factors["C"] * self.psi(k) * z

    def sampling_slack(self, k: int) -> float:
        return (6 * self.log_n) ** k

    def measure_bound(self, k: int, mu_v: int, l_terminal: Fraction | None) -> float:
        """Declared bound on any query measure of a Hyperedge-Approx run."""
        base = self.zeta(k) ** k
        if l_terminal is None or l_terminal <= 0:
            return base
        return max(base, float(Fraction(mu_v) / l_terminal) * self.sampling_slack(k) * self.xi(k))

    def projected_work(self, k: int) -> float:
        """Rough count of discovery repetitions for one full run."""
        levels = k * self.ceil_log_n + 1
        grid = (self.ceil_log_n + 1) ** k
        return float(levels) * self.r_median * grid * self.r_discovery(k)

    def describe(self, k: int) -> dict[str, object]:
        return {
            "mode": self.mode,
            "eps": self.eps,
            "n": self.n,
            "k": k,
            "factors": dict(sorted(self.factors.items())) if not self.faithful_mode else {},
            "eps_prime": float(self.eps_prime),
            "Q": self.Q(k),
            "g": self.g(k),
            "zeta": self.zeta(k),
            "psi": self.psi(k),
            "r_median": self.r_median,
            "r_discovery": self.r_discovery(k),
            "q_disc": self.q_disc(k),
        }


class Bot:
    """The ``⊥`` outcome shared by the heavy-vertex and estimator layers."""

    _instance: "Bot | None" = None

    def __new__(cls) -> "Bot":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOT"


BOT = Bot()

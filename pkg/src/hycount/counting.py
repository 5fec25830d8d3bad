"""The estimator stack: RecursiveApx, MedianApx, GuessApx and Hyperedge-Approx.

Every estimate is an exact :class:`fractions.Fraction`. Randomness flows
through :class:`~hycount.core.RandomStream` labels, so the budgeted and the
unbudgeted recursion see identical samples for the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Sequence

from .core import (
    BOT,
    Bot,
    ParamProfile,
    RandomStream,
    SubVertexSet,
    VertexId,
    as_fraction,
    sample_half,
)
from .enumeration import Overflow, base_case_count
from .heavy import find_heavy, find_heavy_bounded
from .oracle import DetectionOracle, pin


@dataclass(frozen=True)
class Value:
    value: Fraction

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("estimates are nonnegative")


class TooLarge:
    """The ``"L is too large"`` outcome of GuessApx."""

    _instance: "TooLarge | None" = None

    def __new__(cls) -> "TooLarge":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOO_LARGE"


TOO_LARGE = TooLarge()

EstimateOutcome = Value | Bot | TooLarge


@dataclass
class Diagnostics:
    """Counters for rare paths, aggregated over one estimator run."""

    deg_fallback_bot: int = 0
    median_bot: int = 0
    heavy_bot: int = 0
    base_overflow: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "deg_fallback_bot": self.deg_fallback_bot,
            "median_bot": self.median_bot,
            "heavy_bot": self.heavy_bot,
            "base_overflow": self.base_overflow,
        }


@dataclass
class LevelRecord:
    level: int
    lam: Fraction
    sizes: tuple[int, ...]
    heavy_found: int | None
    heavy_estimate: Fraction | None
    branch: str

    def as_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "lambda": float(self.lam),
            "sizes": list(self.sizes),
            "heavy_found": self.heavy_found,
            "heavy_estimate": None if self.heavy_estimate is None else float(self.heavy_estimate),
            "branch": self.branch,
        }


@dataclass
class Context:
    """Per-run settings threaded through the stack.

    ``budgeted=False`` swaps Find-Heavy⊥ for the unbounded Find-Heavy in the
    recursion that receives this context. Count-Heavy is the same procedure
    in both variants, so its nested estimator calls always stay budgeted.
    """

    profile: ParamProfile
    budgeted: bool = True
    diagnostics: Diagnostics = field(default_factory=Diagnostics)
    trace: list[LevelRecord] | None = None


def median_of(values: Sequence[Fraction | int | float]) -> Fraction | int | float:
    """Lower median: element ``(len - 1) // 2`` of the sorted values."""
    if len(values) == 0:
        raise ValueError("median of an empty list")
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def _ctx(profile: ParamProfile | Context) -> Context:
    return profile if isinstance(profile, Context) else Context(profile)


def deg_approx(
    oracle: DetectionOracle,
    v: VertexId,
    lam_prime: Fraction,
    U: SubVertexSet,
    eps: float,
    profile: ParamProfile | Context,
    rng: RandomStream,
) -> Fraction:
    """Estimate the degree of ``v`` in ``G[U]`` by pinning ``v``."""
    ctx = _ctx(profile)
    v = VertexId(*v)
    if oracle.k == 1:
        single = SubVertexSet.from_vertices(U.universe, [v])
        return Fraction(int(oracle.query(single)))
    sub = U.drop_class(v.part)
    pinned = pin(oracle, v)
    res = guess_apx(pinned, sub, lam_prime, eps, ctx, rng.child("guess"))
    if isinstance(res, Value):
        return res.value
    res = median_apx(pinned, sub, lam_prime, eps, ctx, rng.child("median"))
    if isinstance(res, Value):
        return res.value
    ctx.diagnostics.deg_fallback_bot += 1
    return Fraction(0)


def count_heavy(
    oracle: DetectionOracle,
    V: SubVertexSet,
    heavy: frozenset[VertexId] | set[VertexId],
    lam_low: Fraction,
    eps: float,
    profile: ParamProfile | Context,
    rng: RandomStream,
) -> Fraction:
    """Estimate the number of edges touching ``heavy`` without double counting."""
    ctx = _ctx(profile)
    lam_prime = as_fraction(lam_low) / oracle.k
    total = Fraction(0)
    current = V
    for v in sorted(VertexId(*x) for x in heavy):
        if v not in current:
            continue
        total += deg_approx(oracle, v, lam_prime, current, eps, ctx, rng.child("deg", *v))
        current = current.without([v])
    return total


def recursive_apx(
    oracle: DetectionOracle,
    V: SubVertexSet,
    lam: Fraction | float | int,
    profile: ParamProfile | Context,
    rng: RandomStream,
    *,
    trace: list[LevelRecord] | None = None,
) -> Value | Bot:
    """Count heavy edges exactly-ish, recurse on a half sample for the rest."""
    ctx = _ctx(profile)
    prof = ctx.profile
    k = oracle.k
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError("lam must be positive")
    if trace is None:
        trace = ctx.trace
    zeta = prof.zeta(k)
    scale = Fraction(1)
    total = Fraction(0)
    level = 0
    while True:
        stream = rng.child("level", level)
        if ctx.budgeted:
            res = find_heavy_bounded(oracle, V, lam, zeta, prof, stream.child("heavy"))
            if isinstance(res, Bot):
                ctx.diagnostics.heavy_bot += 1
                if trace is not None:
                    trace.append(LevelRecord(level, lam, V.sizes(), None, None, "bot"))
                return BOT
            heavy = res.vertices
        else:
            heavy = find_heavy(oracle, V, lam, prof, stream.child("heavy"))
        if lam <= 1:
            cap = k * zeta if ctx.budgeted else None
            count = base_case_count(oracle, V.restrict_to(heavy), cap)
            if isinstance(count, Overflow):
                ctx.diagnostics.base_overflow += 1
                if trace is not None:
                    trace.append(LevelRecord(level, lam, V.sizes(), len(heavy), None, "bot"))
                return BOT
            if trace is not None:
                trace.append(LevelRecord(level, lam, V.sizes(), len(heavy), Fraction(count), "base"))
            return Value(total + scale * count)
        low = prof.lambda_low(lam, k)
        nested = ctx if ctx.budgeted else replace(ctx, budgeted=True)
        m_heavy = count_heavy(oracle, V, heavy, low, float(prof.eps_prime), nested, stream.child("count"))
        if trace is not None:
            trace.append(LevelRecord(level, lam, V.sizes(), len(heavy), m_heavy, "recurse"))
        total += scale * m_heavy
        V = sample_half(V.without(heavy), stream.child("half").generator())
        lam = lam / 2**k
        scale *= 2**k
        level += 1


def median_apx(
    oracle: DetectionOracle,
    V: SubVertexSet,
    L: Fraction | float | int,
    eps: float,
    profile: ParamProfile | Context,
    rng: RandomStream,
) -> Value | Bot:
    """Median of ``r_median`` independent RecursiveApx runs at ``Λ = L·ε′²/Q``."""
    ctx = _ctx(profile)
    prof = ctx.profile
    L = as_fraction(L)
    if L <= 0:
        raise ValueError("L must be positive")
    lam = L * prof.eps_prime**2 / as_fraction(prof.Q(oracle.k))
    r = prof.r_median
    values: list[Fraction] = []
    bots = 0
    for t in range(r):
        res = recursive_apx(oracle, V, lam, ctx, rng.child("rep", t))
        if isinstance(res, Bot):
            bots += 1
        else:
            values.append(res.value)
    if bots >= r / 10:
        ctx.diagnostics.median_bot += 1
        return BOT
    return Value(median_of(values))


def guess_apx(
    oracle: DetectionOracle,
    V: SubVertexSet,
    L: Fraction | float | int,
    eps: float,
    profile: ParamProfile | Context,
    rng: RandomStream,
) -> Value | TooLarge:
    """Either a ``(1±ε)`` estimate or the verdict that ``L`` is too large."""
    ctx = _ctx(profile)
    L = as_fraction(L)
    for i in range(oracle.k * ctx.profile.ceil_log_n + 1):
        threshold = L * 2**i
        res = median_apx(oracle, V, threshold, eps, ctx, rng.child("guess", i))
        if isinstance(res, Bot):
            continue
        if res.value >= threshold:
            return res
        return TOO_LARGE
    return TOO_LARGE


@dataclass
class ApproxResult:
    estimate: Fraction
    terminal_L: Fraction | None
    terminal_index: int | None
    exact_path: bool
    diagnostics: Diagnostics


def run_hyperedge_approx(
    oracle: DetectionOracle,
    V: SubVertexSet,
    eps: float,
    profile: ParamProfile,
    rng: RandomStream,
    *,
    budgeted: bool = True,
    trace: list[LevelRecord] | None = None,
) -> ApproxResult:
    """:func:`hyperedge_approx` with the terminal threshold and diagnostics.

    Level records of every RecursiveApx call, nested ones included, are
    appended to ``trace`` when it is given.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    eps = min(float(eps), 0.25)
    if profile.eps != eps:
        profile = profile.with_eps(eps)
    ctx = Context(profile, budgeted=budgeted, trace=trace)
    mu = V.measure()
    if mu == 0:
        return ApproxResult(Fraction(0), None, None, False, ctx.diagnostics)
    if profile.n <= 1:
        count = base_case_count(oracle, V, None)
        assert isinstance(count, int)
        return ApproxResult(Fraction(count), None, None, True, ctx.diagnostics)
    last = None
    for i in range(oracle.k * profile.ceil_log_n + 1):
        L = Fraction(mu, 2**i)
        last = (L, i)
        res = guess_apx(oracle, V, L, eps, ctx, rng.child("outer", i))
        if isinstance(res, Value):
            return ApproxResult(res.value, L, i, False, ctx.diagnostics)
    assert last is not None
    return ApproxResult(Fraction(0), last[0], last[1], False, ctx.diagnostics)


def hyperedge_approx(
    oracle: DetectionOracle,
    V: SubVertexSet,
    eps: float,
    profile: ParamProfile,
    rng: RandomStream,
) -> Fraction:
    """Estimate the number of hyperedges of ``G[V]`` within ``(1±ε)`` whp."""
    return run_hyperedge_approx(oracle, V, eps, profile, rng).estimate


"""Command-line front end: ``hycount gen | brute | run``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .core import FACTOR_ALIASES, FACTOR_NAMES, ParamProfile, RandomStream
from .counting import LevelRecord, run_hyperedge_approx
from .oracle import DetectionOracle, brute_force_oracle, instrument
from .problems import (
    HypergraphInstance,
    InstanceError,
    KSumValues,
    clique_oracle,
    clique_to_kpartite,
    dumps_instance,
    ds_oracle,
    ds_to_kpartite,
    ksum_oracle,
    ksum_to_colorful,
    load_instance,
    planted_clique_graph,
    random_graph,
    random_hypergraph,
    random_ksum,
)
from .problems import brute

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INSTANCE = 3
EXIT_GUARD = 4

BRUTE_LIMIT = 10**9
# Faithful constants grow like (k log n)^(k^2); refuse runs projected past this.
FAITHFUL_WORK_LIMIT = 10**9

PROBLEMS = ("hypergraph", "clique", "ds", "ksum")

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "hycount run report",
    "type": "object",
    "required": [
        "problem",
        "k",
        "n",
        "eps",
        "seed",
        "estimate",
        "estimate_fraction",
        "exact",
        "relative_error",
        "total_queries",
        "max_measure",
        "measure_bound",
        "measure_bound_checked",
        "runtime_ms",
        "profile",
        "terminal_index",
        "diagnostics",
        "threads",
    ],
    "properties": {
        "problem": {"enum": list(PROBLEMS)},
        "k": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 0},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer"},
        "estimate": {"type": "number", "minimum": 0},
        "estimate_fraction": {"type": "string", "pattern": "^[0-9]+(/[0-9]+)?$"},
        "exact": {"type": ["integer", "null"], "minimum": 0},
        "relative_error": {"type": ["number", "null"], "minimum": 0},
        "total_queries": {"type": "integer", "minimum": 0},
        "max_measure": {"type": "integer", "minimum": 0},
        "measure_bound": {"type": "number", "minimum": 0},
        "measure_bound_checked": {"type": "boolean"},
        "runtime_ms": {"type": "number", "minimum": 0},
        "profile": {"type": "object"},
        "terminal_index": {"type": ["integer", "null"]},
        "diagnostics": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "threads": {"type": "integer", "minimum": 1},
        "trace": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["level", "lambda", "sizes", "heavy_found", "heavy_estimate", "branch"],
            },
        },
    },
    "additionalProperties": False,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parse_factor(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    name = FACTOR_ALIASES.get(name.strip(), name.strip())
    if not sep or name not in FACTOR_NAMES:
        raise argparse.ArgumentTypeError(
            f"expected NAME=VALUE with NAME in {', '.join(FACTOR_NAMES)}, got {text!r}"
        )
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"factor value must be a number, got {value!r}") from None
    if not (number > 0 and math.isfinite(number)):
        raise argparse.ArgumentTypeError("factor values must be positive and finite")
    return name, number


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("HYCOUNT_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"HYCOUNT_SEED must be an integer, got {env!r}", EXIT_USAGE) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hycount", description="Approximate hyperedge counting with a detection oracle."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a seeded random instance as JSON")
    gen.add_argument(
        "--problem", required=True, choices=("hypergraph", "graph", "planted-clique", "ksum")
    )
    gen.add_argument("--k", type=int)
    gen.add_argument("--parts", type=_parse_ints, help="class sizes, e.g. 20,20,20")
    gen.add_argument("--edges", type=int, help="hyperedge count")
    gen.add_argument("--n", type=int, help="vertex or value count")
    gen.add_argument("--density", type=float, default=0.1)
    gen.add_argument("--cliques", type=int, default=0, help="planted cliques")
    gen.add_argument("--bound", type=int, help="k-sum magnitude bound")
    gen.add_argument("--planted", type=int, default=0, help="planted zero-sum groups")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out", type=Path, help="output path (default: stdout)")

    for name, helptext in (
        ("brute", "exact colorful count by exhaustive scan"),
        ("run", "estimate the count with the detection-oracle estimator"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input", type=Path)
        p.add_argument("--problem", choices=PROBLEMS)
        p.add_argument("--k", type=int)
        if name == "run":
            p.add_argument("--eps", type=float, default=0.25)
            p.add_argument("--seed", type=int)
            p.add_argument("--profile", choices=("practical", "faithful"), default="practical")
            p.add_argument(
                "--profile-factor", type=_parse_factor, action="append", default=[], metavar="NAME=VALUE"
            )
            p.add_argument("--report", type=Path, help="write the JSON report here (default: stdout)")
            p.add_argument("--trace", action="store_true", help="include per-level records")
            p.add_argument("--threads", type=int, default=1, help="worker cap (runs are sequential)")
            p.add_argument("--no-exact", action="store_true", help="skip the brute-force ground truth")
    return parser


def _load(path: Path):
    try:
        return load_instance(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_INSTANCE) from None
    except InstanceError as exc:
        raise CliError(f"invalid instance {path}: {exc}", EXIT_INSTANCE) from None


def _problem_for(inst, problem: str | None, k: int | None) -> tuple[str, int]:
    if isinstance(inst, HypergraphInstance):
        if problem not in (None, "hypergraph"):
            raise CliError(f"a hypergraph instance cannot be run as {problem!r}", EXIT_INSTANCE)
        if k is not None and k != inst.k:
            raise CliError(f"--k {k} does not match the instance's k={inst.k}", EXIT_INSTANCE)
        return "hypergraph", inst.k
    if isinstance(inst, KSumValues):
        if problem not in (None, "ksum"):
            raise CliError(f"a k-sum instance cannot be run as {problem!r}", EXIT_INSTANCE)
        if k is not None and k != inst.k:
            raise CliError(f"--k {k} does not match the instance's k={inst.k}", EXIT_INSTANCE)
        return "ksum", inst.k
    if problem not in ("clique", "ds"):
        raise CliError("a graph instance needs --problem clique or --problem ds", EXIT_INSTANCE)
    if k is None:
        raise CliError("a graph instance needs --k", EXIT_INSTANCE)
    if k < (2 if problem == "clique" else 1):
        raise CliError(f"--k {k} is too small for {problem}", EXIT_INSTANCE)
    return problem, k


def build_oracle(inst, problem: str, k: int) -> DetectionOracle:
    """The detection oracle for ``inst`` viewed as ``problem``."""
    if problem == "hypergraph":
        return brute_force_oracle(inst.universe, inst.edges.tolist())
    if problem == "ksum":
        try:
            return ksum_oracle(ksum_to_colorful(inst.values, k, inst.bound))
        except (ValueError, OverflowError) as exc:
            raise CliError(str(exc), EXIT_INSTANCE) from None
    if problem == "clique":
        return clique_oracle(clique_to_kpartite(inst, k))
    return ds_oracle(ds_to_kpartite(inst, k))


def exact_count(inst, problem: str, k: int) -> int:
    """Brute-force colorful count, refused when the tuple space exceeds the limit."""
    if problem == "hypergraph":
        return int(inst.edges.shape[0])
    n = len(inst.values) if problem == "ksum" else inst.n
    space = n**k
    if space > BRUTE_LIMIT:
        raise CliError(f"tuple space {space} exceeds the brute-force limit {BRUTE_LIMIT}", EXIT_GUARD)
    if problem == "ksum":
        return int(ksum_oracle(ksum_to_colorful(inst.values, k, inst.bound)).witnesses().shape[0])
    if problem == "clique":
        return brute.count_colorful_cliques(clique_to_kpartite(inst, k))
    r = ds_to_kpartite(inst, k)
    return int(brute.special_ds_tuples(r.graph, r.names).shape[0])


def _cmd_gen(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    try:
        if args.problem == "hypergraph":
            if args.parts is None or args.edges is None:
                raise CliError("hypergraph generation needs --parts and --edges", EXIT_USAGE)
            if args.k is not None and args.k != len(args.parts):
                raise CliError("--k must equal the number of --parts", EXIT_USAGE)
            inst = random_hypergraph(args.parts, args.edges, seed)
        elif args.problem == "graph":
            if args.n is None:
                raise CliError("graph generation needs --n", EXIT_USAGE)
            inst = random_graph(args.n, args.density, seed)
        elif args.problem == "planted-clique":
            if args.n is None or args.k is None:
                raise CliError("planted-clique generation needs --n and --k", EXIT_USAGE)
            inst = planted_clique_graph(args.n, args.k, args.cliques, args.density, seed)
        else:
            if args.n is None or args.k is None or args.bound is None:
                raise CliError("ksum generation needs --n, --k and --bound", EXIT_USAGE)
            inst = random_ksum(args.n, args.k, args.bound, args.planted, seed)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    text = dumps_instance(inst)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    return EXIT_OK


def _cmd_brute(args: argparse.Namespace) -> int:
    inst = _load(args.input)
    problem, k = _problem_for(inst, args.problem, args.k)
    print(exact_count(inst, problem, k))
    return EXIT_OK


def _profile(args: argparse.Namespace, n: int, k: int) -> ParamProfile:
    if not (args.eps > 0 and math.isfinite(args.eps)):
        raise CliError("--eps must be positive", EXIT_USAGE)
    if args.threads < 1:
        raise CliError("--threads must be at least 1", EXIT_USAGE)
    if args.profile == "faithful":
        if args.profile_factor:
            raise CliError("--profile-factor only applies to the practical profile", EXIT_USAGE)
        profile = ParamProfile.faithful(n, args.eps)
        work = profile.projected_work(k)
        if not work <= FAITHFUL_WORK_LIMIT:
            raise CliError(
                f"faithful constants exceed this instance: projected work {work:.3g} "
                f"is above {FAITHFUL_WORK_LIMIT:.0e}",
                EXIT_GUARD,
            )
        return profile
    return ParamProfile.practical(n, args.eps, **dict(args.profile_factor))


def _render(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def run_report(
    inst,
    problem: str,
    k: int,
    *,
    eps: float,
    seed: int,
    profile: ParamProfile,
    with_exact: bool = True,
    trace: bool = False,
    threads: int = 1,
) -> dict[str, Any]:
    """Run the estimator on ``inst`` and assemble the report dictionary."""
    oracle = build_oracle(inst, problem, k)
    wrapped, stats = instrument(oracle, log_measures=False)
    universe = oracle.universe
    records: list[LevelRecord] | None = [] if trace else None
    start = time.perf_counter()
    result = run_hyperedge_approx(
        wrapped, universe.full(), eps, profile, RandomStream(seed), trace=records
    )
    runtime_ms = (time.perf_counter() - start) * 1000.0
    mu = universe.full().measure()
    bound = profile.measure_bound(k, mu, result.terminal_L)
    exact = exact_count(inst, problem, k) if with_exact else None
    estimate = result.estimate
    # an empty instance has no relative scale, so the error is measured against 1
    rel = None if exact is None else float(abs(estimate - exact) / max(exact, 1))
    report: dict[str, Any] = {
        "problem": problem,
        "k": k,
        "n": universe.n,
        "eps": profile.eps,
        "seed": seed,
        "estimate": float(estimate),
        "estimate_fraction": _render(estimate),
        "exact": exact,
        "relative_error": rel,
        "total_queries": stats.total_queries,
        "max_measure": stats.max_measure,
        "measure_bound": bound,
        "measure_bound_checked": stats.max_measure <= bound,
        "runtime_ms": runtime_ms,
        "profile": profile.describe(k),
        "terminal_index": result.terminal_index,
        "diagnostics": result.diagnostics.as_dict(),
        "threads": threads,
    }
    if records is not None:
        report["trace"] = [r.as_dict() for r in records]
    return report


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cmd_run(args: argparse.Namespace) -> int:
    inst = _load(args.input)
    problem, k = _problem_for(inst, args.problem, args.k)
    seed = _resolve_seed(args.seed)
    oracle_n = build_oracle(inst, problem, k).universe.n
    profile = _profile(args, oracle_n, k)
    report = run_report(
        inst,
        problem,
        k,
        eps=args.eps,
        seed=seed,
        profile=profile,
        with_exact=not args.no_exact,
        trace=args.trace,
        threads=args.threads,
    )
    text = dumps_report(report)
    if args.report is None:
        sys.stdout.write(text)
    else:
        args.report.write_text(text)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"gen": _cmd_gen, "brute": _cmd_brute, "run": _cmd_run}
    try:
        return handlers[args.command](args)
    except CliError as exc:
        print(f"hycount: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

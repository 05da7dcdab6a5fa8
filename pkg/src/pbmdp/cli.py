"""Command line entry point: ``pbmdp bench | sweep | theory``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from ._validation import ConfigurationError
from .bench import BenchConfig, load_config, run_benchmark, sweep_csv, time_sweep
from .theory.suites import ROW_HEADER, SUITES, run_suite

EXIT_OK, EXIT_CONFIG, EXIT_FAILED = 0, 2, 3


def _run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI file with [env] [solver] [filter] [run] sections")
    p.add_argument("--env")
    p.add_argument("--solver")
    p.add_argument("--episodes", type=int)
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="directory for CSV and JSON output")
    p.add_argument("--timing", action="store_true", help="fill the mean_plan_ms column")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pbmdp", description="Particle-belief planning benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run one benchmark configuration")
    _run_options(bench)
    budget = bench.add_mutually_exclusive_group()
    budget.add_argument("--time", type=float, help="planning seconds per step")
    budget.add_argument("--queries", type=int, help="simulations per step")

    sweep = sub.add_parser("sweep", help="run a benchmark over several budgets")
    _run_options(sweep)
    grid = sweep.add_mutually_exclusive_group(required=True)
    grid.add_argument("--times", help="comma-separated seconds, e.g. 0.01,0.1,1")
    grid.add_argument("--queries", help="comma-separated simulation counts")

    theory = sub.add_parser("theory", help="run an empirical theory suite and print CSV rows")
    theory.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    theory.add_argument("--seed", type=int, default=0)
    theory.add_argument("--out", help="write the CSV here instead of stdout")
    return parser


def _config(args) -> BenchConfig:
    cfg = load_config(args.config) if args.config else BenchConfig()
    overrides = {
        k: v
        for k, v in (
            ("env", args.env),
            ("solver", args.solver),
            ("episodes", args.episodes),
            ("seed", args.seed),
            ("workers", args.workers),
            ("out", args.out),
        )
        if v is not None
    }
    if args.timing:
        overrides["timing"] = True
    if args.command == "bench":
        if args.time is not None:
            overrides.update(budget_mode="time", budget=args.time)
        elif args.queries is not None:
            overrides.update(budget_mode="queries", budget=args.queries)
    if "solver" in overrides and overrides["solver"] != cfg.solver:
        overrides.setdefault("solver_params", {})  # table defaults of another solver do not carry over
    return dataclasses.replace(cfg, **overrides)


def _grid(text: str, kind):
    try:
        return [kind(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse budget grid {text!r}") from None


def _bench(args) -> int:
    cfg = _config(args)
    report = run_benchmark(cfg)
    if cfg.out is None:
        sys.stdout.write(report.to_csv(cfg.timing))
    print(json.dumps(report.summary(), default=str), file=sys.stderr)
    return EXIT_OK


def _sweep(args) -> int:
    cfg = _config(args)
    if args.times is not None:
        cfg, budgets = dataclasses.replace(cfg, budget_mode="time"), _grid(args.times, float)
    else:
        cfg, budgets = dataclasses.replace(cfg, budget_mode="queries", budget=1), _grid(args.queries, int)
    reports = time_sweep(cfg, budgets)
    if cfg.out is None:
        sys.stdout.write(sweep_csv(reports, cfg.timing))
    for b, rep in zip(budgets, reports):
        print(json.dumps({"budget": b} | rep.summary(), default=str), file=sys.stderr)
    return EXIT_OK


def _theory(args) -> int:
    rows = run_suite(args.suite, seed=args.seed)
    text = "\n".join([ROW_HEADER] + [r.csv() for r in rows]) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigurationError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"FAIL {r.experiment} {r.point}: {r.statistic!r} vs {r.bound!r}", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"bench": _bench, "sweep": _sweep, "theory": _theory}[args.command]
    try:
        return handler(args)
    except ConfigurationError as exc:
        print(f"pbmdp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""
Command-line front end.

    python -m src.cli estimate data.csv --value-column wage --group-column smsa
    python -m src.cli compare data.csv --value-column wage --group-column smsa
    python -m src.cli simulate --dist exp --lambda 1 --n 2000 --reps 2000
    python -m src.cli bench --dist lognormal --mu 0.4 --sigma 0.5 --n 10000
    python -m src.cli shard-stats shard1.csv --value-column x --q 2.5 --p 0.75
    python -m src.cli shard-merge shard1.json shard2.json

Exit codes: 0 ok, 2 input error, 3 numeric error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from ..config import Settings
from ..errors import EXIT_OK, InvalidRecord, ShareError
from ..estimators.inference import confidence_interval
from ..estimators.types import ShareEstimate, ShareQuery, VarianceMethod
from ..estimators.variance import DEFAULT_METHODS, infer_share
from ..oracles.models import DistributionModel
from ..simulation.engine import ALL_METHODS, SimulationConfig, run_simulation, run_timing
from ..simulation.grid import grid_configs
from ..simulation.reporting import SCHEMA_VERSION, reports_to_json, simulation_table, timing_table
from ..streaming.accumulators import SufficientStats, finalize, merge
from .comparison import compare_groups
from .datasets import DatasetSpec, parse_csv

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ("lognormal", "exp", "unif")


def _methods(raw: str) -> tuple[VarianceMethod, ...]:
    return tuple(dict.fromkeys(VarianceMethod.parse(m) for m in raw.split(",") if m.strip()))


def _dump(document: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **document}, indent=2, sort_keys=True)


def _fmt(value: float) -> str:
    return f"{value:.6g}"


# =============================================================================
# Argument parsing
# =============================================================================

def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("path", type=Path, help="CSV file")
    parser.add_argument("--value-column", required=True, help="Column holding the positive metric")
    parser.add_argument("--group-column", help="Column splitting rows into groups")
    parser.add_argument("--delimiter", default=",", help="Field separator (default: ,)")
    parser.add_argument("--no-header", action="store_true",
                        help="File has no header row; address columns as 0, 1, ...")
    parser.add_argument("--skip-nonpositive", action="store_true",
                        help="Drop non-positive or unparseable values instead of failing")


def _add_model_args(parser: argparse.ArgumentParser, settings: Settings) -> None:
    parser.add_argument("--dist", choices=DISTRIBUTIONS, default="lognormal")
    parser.add_argument("--mu", type=float, default=0.4, help="Log-normal mu")
    parser.add_argument("--sigma", type=float, default=0.5, help="Log-normal sigma")
    parser.add_argument("--lambda", dest="rate", type=float, default=1.0, help="Exponential rate")
    parser.add_argument("--upper", type=float, default=1.0, help="Uniform upper bound")
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--p", type=float, default=0.75)
    parser.add_argument("--boot", type=int, default=settings.bootstrap_b, help="Bootstrap resamples")
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--methods", default=",".join(m.value for m in ALL_METHODS))
    parser.add_argument("--format", choices=("json", "table"), default="table")


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="share",
        description="Bottom-p share estimation with closed-form variances",
    )
    parser.add_argument("--log-level", default=settings.log_level,
                        help="Logging level (default from SHARE_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    estimate = sub.add_parser("estimate", help="Estimate the share with confidence intervals")
    _add_dataset_args(estimate)
    estimate.add_argument("--p", type=float, default=0.75)
    estimate.add_argument("--methods", default=",".join(m.value for m in DEFAULT_METHODS))
    estimate.add_argument("--level", type=float, default=0.95)
    estimate.add_argument("--boot", type=int, default=settings.bootstrap_b)
    estimate.add_argument("--seed", type=int, default=settings.seed)
    estimate.add_argument("--workers", type=int, default=settings.workers)
    estimate.add_argument("--format", choices=("json", "table"), default="json")

    compare = sub.add_parser("compare", help="Test equal shares in two groups")
    _add_dataset_args(compare)
    compare.add_argument("--p", type=float, default=0.75)
    compare.add_argument("--level", type=float, default=0.95)
    compare.add_argument("--order", help="Group order as 'first,second' (default: file order)")
    compare.add_argument("--format", choices=("json", "table"), default="json")

    simulate = sub.add_parser("simulate", help="Monte Carlo relative bias and coverage")
    _add_model_args(simulate, settings)
    simulate.add_argument("--reps", type=int, default=2000, help="Replications L")
    simulate.add_argument("--workers", type=int, default=settings.workers)
    simulate.add_argument("--grid", action="store_true", help="Run the standard six-model grid")
    simulate.add_argument("--full", action="store_true", help="With --grid: all sizes at L=5000")
    simulate.add_argument("--timing", action="store_true", help="Record per-method runtimes")

    bench = sub.add_parser("bench", help="Mean runtime per variance method")
    _add_model_args(bench, settings)
    bench.add_argument("--repeats", type=int, default=100)

    shard_stats = sub.add_parser("shard-stats", help="Sufficient statistics of one shard")
    _add_dataset_args(shard_stats)
    shard_stats.add_argument("--q", type=float, required=True, help="Threshold from the first pass")
    shard_stats.add_argument("--p", type=float, required=True)

    shard_merge = sub.add_parser("shard-merge", help="Merge shard statistics and finalize")
    shard_merge.add_argument("records", type=Path, nargs="+", help="JSON files from shard-stats")
    shard_merge.add_argument("--level", type=float, default=0.95)
    shard_merge.add_argument("--format", choices=("json", "table"), default="json")

    return parser


def _dataset_spec(args: argparse.Namespace) -> DatasetSpec:
    return DatasetSpec(
        path=args.path,
        value_column=args.value_column,
        group_column=args.group_column,
        delimiter=args.delimiter,
        header=not args.no_header,
    )


def _model(args: argparse.Namespace) -> DistributionModel:
    if args.dist == "lognormal":
        return DistributionModel.log_normal(args.mu, args.sigma)
    if args.dist == "exp":
        return DistributionModel.exponential(args.rate)
    return DistributionModel.uniform(args.upper)


# =============================================================================
# Subcommands
# =============================================================================

def _estimate_record(group: str, est: ShareEstimate, level: float) -> dict:
    return {
        "group": group,
        **est.to_dict(),
        "intervals": [confidence_interval(est, m, level).to_dict() for m in est.variances],
    }


def _estimate_table(records: list[dict]) -> str:
    lines = []
    for r in records:
        lines.append(f"{r['group']}: n={r['n']}  q_hat={_fmt(r['q_hat'])}  m_hat={_fmt(r['m_hat'])}")
        for ci in r["intervals"]:
            variance = r["variances"][ci["method"]]
            lines.append(
                f"  {ci['method']:<15} V={_fmt(variance)}  "
                f"{100 * ci['level']:g}% CI [{_fmt(ci['lower'])}, {_fmt(ci['upper'])}]"
            )
    return "\n".join(lines)


def cmd_estimate(args: argparse.Namespace) -> str:
    parsed = parse_csv(_dataset_spec(args), skip_nonpositive=args.skip_nonpositive)
    query = ShareQuery(args.p)
    methods = _methods(args.methods)

    records = []
    for group, sample in parsed.groups.items():
        est = infer_share(sample, query, methods, args.boot, args.seed, args.workers)
        records.append(_estimate_record(group, est, args.level))

    if args.format == "table":
        return _estimate_table(records)
    return _dump({
        "kind": "estimate",
        "dataset": {
            "path": str(args.path),
            "value_column": args.value_column,
            "group_column": args.group_column,
            "skipped": parsed.skipped,
        },
        "results": records,
    })


def cmd_compare(args: argparse.Namespace) -> str:
    parsed = parse_csv(_dataset_spec(args), skip_nonpositive=args.skip_nonpositive)
    order = [name.strip() for name in args.order.split(",")] if args.order else None
    report = compare_groups(parsed.groups, args.p, args.level, order)

    if args.format == "json":
        return _dump({"kind": "comparison", **report.to_dict()})

    lines = [f"{'group':<10} {'size':>8} {'m_hat':>12} {'V proposed':>12} {'V fixed_q':>12}"]
    for name, est in zip(report.groups, report.estimates):
        lines.append(
            f"{name:<10} {est.n:>8} {_fmt(est.m_hat):>12} "
            f"{_fmt(est.variance('proposed')):>12} {_fmt(est.variance('fixed_q')):>12}"
        )
    for test in report.tests:
        decision = "reject" if report.rejects(test.method) else "keep"
        lines.append(
            f"{test.method.value:<10} t={_fmt(test.t_statistic)}  p={_fmt(test.p_value)}  {decision}"
        )
    return "\n".join(lines)


def cmd_simulate(args: argparse.Namespace) -> str:
    methods = _methods(args.methods)
    if args.grid:
        configs = grid_configs(args.seed, full=args.full, bootstrap_b=args.boot, methods=methods)
    else:
        configs = [
            SimulationConfig(
                model=_model(args),
                n=args.n,
                p=args.p,
                replications=args.reps,
                bootstrap_b=args.boot,
                seed=args.seed,
                methods=methods,
            )
        ]
    reports = [run_simulation(c, workers=args.workers, record_timing=args.timing) for c in configs]
    if args.format == "json":
        return reports_to_json(reports, kind="simulation")
    return simulation_table(reports)


def cmd_bench(args: argparse.Namespace) -> str:
    config = SimulationConfig(
        model=_model(args),
        n=args.n,
        p=args.p,
        bootstrap_b=args.boot,
        seed=args.seed,
        methods=_methods(args.methods),
    )
    report = run_timing(config, repeats=args.repeats)
    if args.format == "json":
        return reports_to_json([report], kind="timing")
    return timing_table([report])


def cmd_shard_stats(args: argparse.Namespace) -> str:
    parsed = parse_csv(_dataset_spec(args), skip_nonpositive=args.skip_nonpositive)
    records = []
    for group, sample in parsed.groups.items():
        stats = SufficientStats.from_values(sample.values, args.q, args.p)
        records.append(stats.to_record())
        logger.info("Shard group %s: n=%d below q: %d", group, stats.n, stats.s_a)
    return _dump({"kind": "sufficient_stats", "records": records})


def _load_records(path: Path) -> list[SufficientStats]:
    try:
        document = json.loads(path.read_text())
    except FileNotFoundError:
        raise InvalidRecord(f"Record file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise InvalidRecord(f"{path} is not valid JSON: {e}") from None
    records = document.get("records", [document]) if isinstance(document, dict) else document
    if not isinstance(records, list):
        raise InvalidRecord(f"{path} holds no record list")
    return [SufficientStats.from_record(r) for r in records]


def cmd_shard_merge(args: argparse.Namespace) -> str:
    parts = [stats for path in args.records for stats in _load_records(path)]
    if not parts:
        raise InvalidRecord("No records to merge")
    merged = parts[0]
    for part in parts[1:]:
        merged = merge(merged, part)
    est = finalize(merged)
    record = _estimate_record("merged", est, args.level)
    if args.format == "table":
        return _estimate_table([record])
    return _dump({"kind": "estimate", "stats": merged.to_record(), "results": [record]})


COMMANDS = {
    "estimate": cmd_estimate,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "shard-stats": cmd_shard_stats,
    "shard-merge": cmd_shard_merge,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    """
    Parse argv, run one subcommand and print its output to stdout.

    Returns:
        Process exit code
    """
    try:
        settings = Settings.from_env()
    except ShareError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code

    args = build_parser(settings).parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        output = COMMANDS[args.command](args)
    except ShareError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code

    print(output)
    return EXIT_OK

"""
Text and JSON renderings of simulation and timing reports.
"""

import json
from typing import Sequence

from ..estimators.types import VarianceMethod
from .engine import SimulationReport, TimingReport

SCHEMA_VERSION = 1

TABLE_METHODS = (
    VarianceMethod.PROPOSED,
    VarianceMethod.FIXED_Q,
    VarianceMethod.BOOTSTRAP,
)

SIMULATION_HEADER = (
    "case",
    "n",
    "m",
    "true variance",
    "RB proposed",
    "RB fixed_q",
    "RB bootstrap",
    "cov proposed",
    "cov fixed_q",
    "cov bootstrap",
)

TIMING_HEADER = ("case", "n", "proposed (ms)", "fixed_q (ms)", "bootstrap (ms)", "ratio")

MISSING = "-"


def _num(value: float | None) -> str:
    return MISSING if value is None else f"{value:.6g}"


def _align(rows: list[Sequence[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def simulation_table(reports: Sequence[SimulationReport]) -> str:
    """Aligned table: relative biases and coverages in percent, 6 significant digits."""
    rows = [SIMULATION_HEADER]
    for report in reports:
        bias = [report.relative_bias.get(m) for m in TABLE_METHODS]
        cover = [report.coverage.get(m) for m in TABLE_METHODS]
        rows.append(
            (
                report.config.model.label,
                str(report.config.n),
                _num(report.true_m),
                _num(report.true_variance),
                *(_num(None if b is None else 100.0 * b) for b in bias),
                *(_num(None if c is None else 100.0 * c) for c in cover),
            )
        )
    return _align(rows)


def timing_table(reports: Sequence[TimingReport]) -> str:
    rows = [TIMING_HEADER]
    for report in reports:
        ms = [report.mean_runtime.get(m) for m in TABLE_METHODS]
        rows.append(
            (
                report.config.model.label,
                str(report.config.n),
                *(_num(None if t is None else 1000.0 * t) for t in ms),
                _num(report.bootstrap_ratio),
            )
        )
    return _align(rows)


def reports_to_json(reports: Sequence[SimulationReport | TimingReport], kind: str = "simulation") -> str:
    """JSON document {schema_version, kind, reports: [...]}."""
    document = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "reports": [report.to_dict() for report in reports],
    }
    return json.dumps(document, indent=2, sort_keys=True)

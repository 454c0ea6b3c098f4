"""
CSV ingestion: one positive Sample per group.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from ..errors import DatasetNotFound, EmptyGroup, MissingColumn, NonPositiveValues
from ..estimators.types import Sample

logger = logging.getLogger(__name__)

ALL_ROWS = "all"


@dataclass(frozen=True)
class DatasetSpec:
    """
    Where the values live.

    Without a header, columns are addressed by 0-based position ("0", "1", ...).
    """
    path: Path
    value_column: str
    group_column: str | None = None
    delimiter: str = ","
    header: bool = True

    def __post_init__(self):
        object.__setattr__(self, "path", Path(self.path))


@dataclass(frozen=True)
class ParsedDataset:
    """Samples keyed by group, in order of first appearance."""
    groups: dict[str, Sample]
    skipped: dict[str, int] = field(default_factory=dict)

    @property
    def total_skipped(self) -> int:
        return sum(self.skipped.values())

    def counts(self) -> dict[str, int]:
        return {name: sample.n for name, sample in self.groups.items()}


def _read_frame(spec: DatasetSpec) -> pd.DataFrame:
    if not spec.path.is_file():
        raise DatasetNotFound(f"Dataset not found: {spec.path}")
    try:
        frame = pd.read_csv(
            spec.path,
            sep=spec.delimiter,
            header=0 if spec.header else None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise EmptyGroup(f"{spec.path} contains no rows") from None
    except (pd.errors.ParserError, UnicodeDecodeError, OSError) as e:
        raise DatasetNotFound(f"Cannot read {spec.path}: {e}") from None
    frame.columns = [str(c).strip() for c in frame.columns]
    return frame


def _column(frame: pd.DataFrame, name: str, spec: DatasetSpec) -> pd.Series:
    if name not in frame.columns:
        available = ", ".join(frame.columns)
        raise MissingColumn(f"Column {name!r} not in {spec.path} (columns: {available})")
    return frame[name]


def parse_csv(spec: DatasetSpec, skip_nonpositive: bool = False) -> ParsedDataset:
    """
    Load the value column, split by the group column.

    Args:
        spec: File, columns and format
        skip_nonpositive: Drop (and count) rows whose value is non-positive
            or unparseable instead of failing

    Returns:
        ParsedDataset; a single group named "all" when no group column is set

    Raises:
        DatasetNotFound: Missing or unreadable file
        MissingColumn: A named column is absent
        EmptyGroup: No rows, or a group left without rows
        NonPositiveValues: Bad values in strict mode
    """
    frame = _read_frame(spec)
    raw = _column(frame, spec.value_column, spec)
    if spec.group_column is None:
        keys = pd.Series(ALL_ROWS, index=frame.index)
    else:
        keys = _column(frame, spec.group_column, spec).str.strip()

    if frame.empty:
        raise EmptyGroup(f"{spec.path} has a header but no data rows")

    values = pd.to_numeric(raw.str.strip(), errors="coerce")
    bad = values.isna() | ~(values > 0) | ~values.abs().lt(float("inf"))
    n_bad = int(bad.sum())
    if n_bad and not skip_nonpositive:
        raise NonPositiveValues(
            f"{n_bad} rows of {spec.value_column!r} are non-positive or unparseable "
            "(use --skip-nonpositive to drop them)",
            count=n_bad,
        )

    skipped = {str(k): int(v) for k, v in bad.groupby(keys, sort=False).sum().items() if v}
    if n_bad:
        logger.warning("Skipped %d non-positive or unparseable rows in %s", n_bad, spec.path)

    groups = {}
    for key in dict.fromkeys(keys):
        mask = (keys == key) & ~bad
        if not mask.any():
            raise EmptyGroup(f"Group {key!r} has no usable rows")
        groups[str(key)] = Sample(values[mask].to_numpy(dtype="float64"))

    logger.info("Loaded %s", ", ".join(f"{k}: n={s.n}" for k, s in groups.items()))
    return ParsedDataset(groups=groups, skipped=skipped)

from .comparison import ComparisonReport, GroupTest, compare_groups
from .datasets import DatasetSpec, ParsedDataset, parse_csv
from .commands import build_parser, run_cli

__all__ = [
    "ComparisonReport",
    "GroupTest",
    "compare_groups",
    "DatasetSpec",
    "ParsedDataset",
    "parse_csv",
    "build_parser",
    "run_cli",
]

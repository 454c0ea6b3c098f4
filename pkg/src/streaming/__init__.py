from .exact_sum import ExactSum
from .accumulators import (
    RECORD_FIELDS,
    SufficientStats,
    accumulate,
    finalize,
    merge,
    shard_statistics,
    two_pass_estimate,
)

__all__ = [
    "ExactSum",
    "RECORD_FIELDS",
    "SufficientStats",
    "accumulate",
    "finalize",
    "merge",
    "shard_statistics",
    "two_pass_estimate",
]

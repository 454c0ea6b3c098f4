"""
Nonparametric bootstrap of the bottom-p share.

Resample j draws its indices from a generator keyed by (seed, j), so the
replicates do not depend on evaluation order or thread count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidConfig
from ..estimators.share import checked_order_index, share_statistic
from ..estimators.types import Sample

SHARE_AT_P = "share_at_p"

SeedKey = int | tuple[int, ...]


@dataclass(frozen=True)
class ResamplePlan:
    """How many resamples to draw and from which seed."""
    b: int
    seed: SeedKey
    statistic: str = SHARE_AT_P

    def __post_init__(self):
        if int(self.b) != self.b or self.b < 2:
            raise InvalidConfig(f"Bootstrap needs b >= 2 resamples, got {self.b}")
        key = self.seed if isinstance(self.seed, tuple) else (self.seed,)
        if not key or any(int(s) != s or s < 0 for s in key):
            raise InvalidConfig(f"Bootstrap seed must be non-negative integers, got {self.seed}")
        if self.statistic != SHARE_AT_P:
            raise InvalidConfig(f"Unsupported bootstrap statistic {self.statistic!r}")

    @property
    def seed_key(self) -> tuple[int, ...]:
        return self.seed if isinstance(self.seed, tuple) else (self.seed,)


def resample_rng(plan: ResamplePlan, index: int) -> np.random.Generator:
    """Generator for resample `index`, independent of every other resample."""
    return np.random.default_rng([*plan.seed_key, index])


def resample_indices(n: int, plan: ResamplePlan, index: int) -> np.ndarray:
    """The n indices (drawn with replacement) used by resample `index`."""
    return resample_rng(plan, index).integers(0, n, size=n)


def bootstrap_distribution(
    sample: Sample,
    p: float,
    plan: ResamplePlan,
    fixed_q: float | None = None,
    workers: int | None = None,
) -> np.ndarray:
    """
    Bootstrap replicates of m-hat, re-estimating q-hat inside each resample.

    Args:
        sample: Observations (resampled raw, never through precomputed terms)
        p: Probability defining the share
        plan: Number of resamples and seed
        fixed_q: Keep the quantile fixed instead of re-estimating it
        workers: Threads to spread resamples over

    Returns:
        Array of plan.b resampled shares, in resample order
    """
    values = sample.values
    n = sample.n
    k = checked_order_index(n, p) if fixed_q is None else 0

    def replicate(index: int) -> float:
        resampled = values[resample_indices(n, plan, index)]
        return share_statistic(resampled, k, fixed_q)[0]

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            replicates = list(pool.map(replicate, range(plan.b)))
    else:
        replicates = [replicate(index) for index in range(plan.b)]

    return np.asarray(replicates, dtype=np.float64)

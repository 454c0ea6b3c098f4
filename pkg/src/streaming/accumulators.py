"""
Mergeable sufficient statistics for the bottom-p share.

Pass 1 fixes the threshold q (exact order statistic, or a known value).
Pass 2 folds every observation into six sums taken against q; shards are
folded independently and merged. finalize() rebuilds the point estimate
and both closed-form variances from the sums alone.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from ..errors import (
    DegenerateSampleWarning,
    InsufficientData,
    InvalidQuery,
    InvalidRecord,
    NonPositiveObservation,
    ThresholdMismatch,
)
from ..estimators.share import DEGENERATE_FLAG, estimate_quantile
from ..estimators.types import Sample, ShareEstimate, VarianceMethod
from .exact_sum import ExactSum

logger = logging.getLogger(__name__)

RECORD_FIELDS = ("n", "s_x", "s_xx", "s_xa", "s_xxa", "s_a", "q", "p")


@dataclass
class SufficientStats:
    """
    Six sums against a fixed threshold q.

    s_x = sum x, s_xx = sum x^2, s_xa = sum x 1{x <= q},
    s_xxa = sum x^2 1{x <= q}, s_a = sum 1{x <= q}, n = count.
    Single-writer: add/extend mutate in place, the module-level
    accumulate/merge return new objects.
    """
    q: float
    p: float
    n: int = 0
    s_a: int = 0
    _x: ExactSum = field(default_factory=ExactSum, repr=False)
    _xx: ExactSum = field(default_factory=ExactSum, repr=False)
    _xa: ExactSum = field(default_factory=ExactSum, repr=False)
    _xxa: ExactSum = field(default_factory=ExactSum, repr=False)

    def __post_init__(self):
        self.q = float(self.q)
        self.p = float(self.p)
        if not math.isfinite(self.q) or self.q <= 0:
            raise InvalidQuery(f"Threshold q must be positive and finite, got {self.q}")
        if not 0.0 < self.p < 1.0:
            raise InvalidQuery(f"p must lie strictly between 0 and 1, got {self.p}")

    @classmethod
    def empty(cls, q: float, p: float) -> "SufficientStats":
        return cls(q=q, p=p)

    @classmethod
    def from_values(cls, values: Iterable[float], q: float, p: float) -> "SufficientStats":
        stats = cls.empty(q, p)
        stats.extend(values)
        return stats

    @property
    def s_x(self) -> float:
        return self._x.value

    @property
    def s_xx(self) -> float:
        return self._xx.value

    @property
    def s_xa(self) -> float:
        return self._xa.value

    @property
    def s_xxa(self) -> float:
        return self._xxa.value

    def add(self, x: float) -> None:
        x = float(x)
        if not math.isfinite(x) or x <= 0:
            raise NonPositiveObservation(f"Streamed observations must be positive and finite, got {x}")
        xx = x * x
        self.n += 1
        self._x.add(x)
        self._xx.add(xx)
        if x <= self.q:
            self.s_a += 1
            self._xa.add(x)
            self._xxa.add(xx)

    def extend(self, values: Iterable[float]) -> None:
        """Fold a whole chunk at once (vectorised)."""
        x = np.asarray(values if isinstance(values, np.ndarray) else list(values), dtype=np.float64).ravel()
        if x.size == 0:
            return
        bad = ~np.isfinite(x) | (x <= 0)
        if bad.any():
            raise NonPositiveObservation(
                f"Streamed observations must be positive and finite; {int(bad.sum())} are not"
            )
        xx = x * x
        below = x <= self.q
        self.n += int(x.size)
        self.s_a += int(below.sum())
        self._x.add_chunk(x)
        self._xx.add_chunk(xx)
        self._xa.add_chunk(x[below])
        self._xxa.add_chunk(xx[below])

    def copy(self) -> "SufficientStats":
        return SufficientStats(
            q=self.q,
            p=self.p,
            n=self.n,
            s_a=self.s_a,
            _x=self._x.copy(),
            _xx=self._xx.copy(),
            _xa=self._xa.copy(),
            _xxa=self._xxa.copy(),
        )

    def to_record(self) -> dict:
        """Flat record for shard hand-off."""
        return {
            "n": self.n,
            "s_x": self.s_x,
            "s_xx": self.s_xx,
            "s_xa": self.s_xa,
            "s_xxa": self.s_xxa,
            "s_a": self.s_a,
            "q": self.q,
            "p": self.p,
        }

    @classmethod
    def from_record(cls, record: Mapping) -> "SufficientStats":
        """
        Rebuild an accumulator from to_record() output.

        Raises:
            InvalidRecord: Missing fields or sums that break 0 <= s_xa <= s_x,
                0 <= s_xxa <= s_xx, 0 <= s_a <= n
        """
        missing = [name for name in RECORD_FIELDS if name not in record]
        if missing:
            raise InvalidRecord(f"Record is missing fields: {', '.join(missing)}")
        try:
            n, s_a = int(record["n"]), int(record["s_a"])
            sums = {name: float(record[name]) for name in ("s_x", "s_xx", "s_xa", "s_xxa")}
        except (TypeError, ValueError) as e:
            raise InvalidRecord(f"Record has a non-numeric field: {e}") from None

        if not all(math.isfinite(v) and v >= 0 for v in sums.values()):
            raise InvalidRecord("Record sums must be finite and non-negative")
        if not 0 <= s_a <= n:
            raise InvalidRecord(f"Record needs 0 <= s_a <= n, got s_a={s_a}, n={n}")
        if sums["s_xa"] > sums["s_x"] or sums["s_xxa"] > sums["s_xx"]:
            raise InvalidRecord("Record sums below q exceed the totals")

        return cls(
            q=record["q"],
            p=record["p"],
            n=n,
            s_a=s_a,
            _x=ExactSum([sums["s_x"]]),
            _xx=ExactSum([sums["s_xx"]]),
            _xa=ExactSum([sums["s_xa"]]),
            _xxa=ExactSum([sums["s_xxa"]]),
        )


def accumulate(stats: SufficientStats, x: float) -> SufficientStats:
    """
    Fold one observation into a copy of stats.

    Raises:
        NonPositiveObservation: x is zero, negative or not finite
    """
    result = stats.copy()
    result.add(x)
    return result


def merge(a: SufficientStats, b: SufficientStats) -> SufficientStats:
    """
    Combine accumulators built on disjoint shards against the same (q, p).

    Raises:
        ThresholdMismatch: a and b disagree on q or p
    """
    if a.q != b.q or a.p != b.p:
        raise ThresholdMismatch(f"Cannot merge stats at (q={a.q}, p={a.p}) with (q={b.q}, p={b.p})")
    logger.debug("Merging shards with n=%d and n=%d", a.n, b.n)
    return SufficientStats(
        q=a.q,
        p=a.p,
        n=a.n + b.n,
        s_a=a.s_a + b.s_a,
        _x=a._x.merged(b._x),
        _xx=a._xx.merged(b._xx),
        _xa=a._xa.merged(b._xa),
        _xxa=a._xxa.merged(b._xxa),
    )


def finalize(stats: SufficientStats) -> ShareEstimate:
    """
    Point estimate plus proposed and fixed-q variances from the six sums.

    With r_i = x_i a_i - m x_i - q a_i + q p and a_i^2 = a_i, c = q p:

        sum r^2 = s_xxa (1 - 2m) + m^2 s_xx + q^2 s_a + n c^2
                  + s_xa (2mq + 2c - 2q) - 2mc s_x - 2qc s_a
        sum Y^2 = s_xxa (1 - 2m) + m^2 s_xx

    Both are evaluated in exact rational arithmetic on the float sums.

    Raises:
        InsufficientData: n < 2 or s_x = 0
    """
    if stats.n < 2:
        raise InsufficientData(f"Need at least 2 observations to finalize, got {stats.n}")
    s_x = stats.s_x
    if s_x <= 0:
        raise InsufficientData("Sum of observations is zero")

    m_hat = min(stats.s_xa / s_x, 1.0)
    estimate = ShareEstimate(m_hat=m_hat, q_hat=stats.q, n=stats.n, p=stats.p)

    n = Fraction(stats.n)
    sx, sxx = Fraction(s_x), Fraction(stats.s_xx)
    sxa, sxxa = Fraction(stats.s_xa), Fraction(stats.s_xxa)
    sa = Fraction(stats.s_a)
    m, q = Fraction(m_hat), Fraction(stats.q)
    c = q * Fraction(stats.p)

    if n * sxx == sx * sx:
        message = f"All {stats.n} streamed observations are equal; variance set to 0"
        logger.warning(message)
        warnings.warn(message, DegenerateSampleWarning, stacklevel=2)
        return (
            estimate.with_variance(VarianceMethod.PROPOSED, 0.0)
            .with_variance(VarianceMethod.FIXED_Q, 0.0)
            .with_flag(DEGENERATE_FLAG)
        )

    sum_y2 = sxxa * (1 - 2 * m) + m * m * sxx
    sum_r2 = (
        sum_y2
        + q * q * sa
        + n * c * c
        + sxa * (2 * m * q + 2 * c - 2 * q)
        - 2 * m * c * sx
        - 2 * q * c * sa
    )
    denom = sx * sx
    return estimate.with_variance(
        VarianceMethod.PROPOSED, max(float(sum_r2 / denom), 0.0)
    ).with_variance(
        VarianceMethod.FIXED_Q, max(float(sum_y2 / denom), 0.0)
    )


def shard_statistics(
    shards: Iterable[Iterable[float]],
    q: float,
    p: float,
    workers: int | None = None,
) -> SufficientStats:
    """
    Map every shard to SufficientStats and reduce them with merge.

    Args:
        shards: Disjoint chunks of the data
        q: Threshold fixed by the first pass
        p: Nominal probability
        workers: Threads for the map step

    Returns:
        Merged accumulator (empty when there are no shards)
    """
    def build(shard: Iterable[float]) -> SufficientStats:
        return SufficientStats.from_values(shard, q, p)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(build, shards))
    else:
        parts = [build(shard) for shard in shards]

    return reduce(merge, parts, SufficientStats.empty(q, p))


def two_pass_estimate(
    shards: Iterable[np.ndarray],
    p: float,
    workers: int | None = None,
) -> ShareEstimate:
    """
    Exact q-hat over the union of shards, then the streamed pass.

    Args:
        shards: Chunks of positive observations
        p: Nominal probability
        workers: Threads for the accumulation pass

    Returns:
        finalize() of the merged accumulator
    """
    shards = [np.asarray(shard, dtype=np.float64).ravel() for shard in shards]
    q_hat = estimate_quantile(Sample(np.concatenate(shards)), p)
    return finalize(shard_statistics(shards, q_hat, p, workers))

"""
Wald confidence intervals and the two-sample share comparison.
"""

import math

from scipy import stats

from ..errors import InvalidQuery, PMismatch
from .types import ConfidenceInterval, ShareEstimate, VarianceMethod


def normal_critical_value(level: float) -> float:
    """z such that P(|N(0,1)| <= z) = level."""
    if not 0.0 < level < 1.0:
        raise InvalidQuery(f"Confidence level must lie strictly between 0 and 1, got {level}")
    return float(stats.norm.ppf(0.5 + level / 2.0))


def confidence_interval(
    est: ShareEstimate,
    method: "str | VarianceMethod" = VarianceMethod.PROPOSED,
    level: float = 0.95,
) -> ConfidenceInterval:
    """
    Normal-approximation interval for the share.

    Args:
        est: Estimate carrying the variance for method
        method: Which variance to use
        level: Coverage level in (0, 1)

    Returns:
        ConfidenceInterval m_hat +/- z_{(1+level)/2} * sqrt(V)

    Raises:
        MethodMissing: est has no variance for method
    """
    method = VarianceMethod.parse(method)
    half_width = normal_critical_value(level) * math.sqrt(est.variance(method))
    return ConfidenceInterval(
        lower=est.m_hat - half_width,
        upper=est.m_hat + half_width,
        level=level,
        method=method,
    )


def two_sample_test(
    a: ShareEstimate,
    b: ShareEstimate,
    method: "str | VarianceMethod" = VarianceMethod.PROPOSED,
) -> tuple[float, float]:
    """
    z-test of equal shares in two independent samples.

    Args:
        a: First group's estimate
        b: Second group's estimate
        method: Variance method used for both groups

    Returns:
        (t_statistic, one-sided p-value P(N(0,1) >= t))

    Raises:
        MethodMissing: A group lacks the variance
        PMismatch: The groups were estimated at different p
    """
    method = VarianceMethod.parse(method)
    if a.p != b.p:
        raise PMismatch(f"Cannot compare shares at p={a.p} and p={b.p}")

    diff = a.m_hat - b.m_hat
    pooled = a.variance(method) + b.variance(method)
    if pooled == 0.0:
        t = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    else:
        t = diff / math.sqrt(pooled)
    return t, float(stats.norm.sf(t))

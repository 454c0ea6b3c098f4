"""
Point estimation of the bottom-p share.

q-hat is the floor(n p)-th order statistic (1-indexed) and
m-hat = sum(X 1{X <= q-hat}) / sum(X).
"""

import math
from fractions import Fraction

import numpy as np

from ..errors import InvalidQuery, QuantileIndexZero
from .types import InfluenceTerms, Sample, ShareEstimate, ShareQuery

DEGENERATE_FLAG = "degenerate_sample"


def order_index(n: int, p: float) -> int:
    """
    floor(n * p), taken on the decimal value of p.

    Using the decimal literal avoids binary artefacts such as
    floor(100 * 0.29) == 28.
    """
    if not 0.0 < p < 1.0:
        raise InvalidQuery(f"p must lie strictly between 0 and 1, got {p}")
    return math.floor(n * Fraction(repr(float(p))))


def share_below(values: np.ndarray, q: float) -> float:
    """Share of the total held by values at or below q (ties included)."""
    below = values[values <= q].sum()
    total = values.sum()
    return min(float(below / total), 1.0)


def share_statistic(values: np.ndarray, k: int, fixed_q: float | None = None) -> tuple[float, float]:
    """
    Evaluate (m-hat, q-hat) on raw values.

    Shared by estimate_share and every bootstrap resample so both run
    the identical pipeline.

    Args:
        values: Positive observations
        k: 1-indexed order statistic used as q-hat (ignored when fixed_q is set)
        fixed_q: Known quantile, if any

    Returns:
        (m_hat, q_hat)
    """
    if fixed_q is None:
        q_hat = float(np.partition(values, k - 1)[k - 1])
    else:
        q_hat = fixed_q
    return share_below(values, q_hat), q_hat


def checked_order_index(n: int, p: float) -> int:
    """order_index, refusing the empty index 0 instead of clamping it."""
    k = order_index(n, p)
    if k == 0:
        raise QuantileIndexZero(
            f"floor(n * p) = 0 for n={n}, p={p}; need at least {math.ceil(1 / p)} observations"
        )
    return k


def estimate_quantile(sample: Sample, p: float) -> float:
    """
    Sample quantile q-hat = X_(floor(n p)).

    Raises:
        QuantileIndexZero: floor(n p) = 0
    """
    k = checked_order_index(sample.n, p)
    return float(np.partition(sample.values, k - 1)[k - 1])


def estimate_share(sample: Sample, query: ShareQuery) -> ShareEstimate:
    """
    Plug-in estimate of the bottom-p share (no variances attached).

    Args:
        sample: Positive observations
        query: p, and a known quantile when quantile_mode is fixed_known

    Returns:
        ShareEstimate with m_hat, q_hat, n and p
    """
    k = checked_order_index(sample.n, query.p) if query.fixed_q is None else 0
    m_hat, q_hat = share_statistic(sample.values, k, query.fixed_q)

    flags = (DEGENERATE_FLAG,) if sample.is_degenerate() else ()
    return ShareEstimate(
        m_hat=m_hat,
        q_hat=q_hat,
        n=sample.n,
        p=query.p,
        quantile_mode=query.quantile_mode,
        flags=flags,
    )


def influence_terms(sample: Sample, m_hat: float, q_hat: float, p: float) -> InfluenceTerms:
    """
    Per-observation terms of the estimating equations.

    Y_i = X_i 1{X_i <= q} - m X_i and Z_i = 1{X_i <= q} - p, with p the
    nominal probability unless the caller passes the empirical fraction.
    """
    x = sample.values
    below = (x <= q_hat).astype(np.float64)
    y = x * below - m_hat * x
    z = below - p
    return InfluenceTerms(y=y, z=z)

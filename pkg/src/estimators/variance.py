"""
Variance estimators for the bottom-p share.

- proposed: sum((Y - q Z)^2) / (sum X)^2, accounts for the randomness of q-hat
- fixed_q: sum(Y^2) / (sum X)^2, treats q-hat as a known constant
- beach_davidson: classical closed form through the conditional mean and
  variance below q-hat
- bootstrap: variance of m-hat over full-pipeline resamples
"""

import logging
import warnings
from typing import Iterable

import numpy as np
from scipy import stats

from ..errors import DegenerateConditional, DegenerateSampleWarning, NonPositiveDensity
from .share import estimate_share, influence_terms
from .types import Sample, ShareEstimate, ShareQuery, VarianceMethod

logger = logging.getLogger(__name__)

DEFAULT_METHODS = (VarianceMethod.PROPOSED, VarianceMethod.FIXED_Q)


def _warn_degenerate(sample: Sample) -> None:
    message = f"All {sample.n} observations equal {sample.values[0]}; variance set to 0"
    logger.warning(message)
    warnings.warn(message, DegenerateSampleWarning, stacklevel=3)


def variance_proposed(sample: Sample, est: ShareEstimate, *, empirical_p: bool = False) -> float:
    """
    Closed-form variance of m-hat that accounts for estimating q-hat.

    Args:
        sample: The sample est was computed from
        est: Point estimate (m_hat, q_hat, p)
        empirical_p: Center Z on the observed fraction below q-hat instead of
            the nominal p

    Returns:
        sum((Y_i - q Z_i)^2) / (sum X_i)^2
    """
    if sample.is_degenerate():
        _warn_degenerate(sample)
        return 0.0

    x = sample.values
    p = float(np.mean(x <= est.q_hat)) if empirical_p else est.p
    terms = influence_terms(sample, est.m_hat, est.q_hat, p)
    residual = terms.y - est.q_hat * terms.z
    return float(np.sum(residual * residual) / np.sum(x) ** 2)


def variance_fixed_q(sample: Sample, est: ShareEstimate) -> float:
    """Variance obtained by treating q-hat as known: sum(Y_i^2) / (sum X_i)^2."""
    if sample.is_degenerate():
        _warn_degenerate(sample)
        return 0.0

    terms = influence_terms(sample, est.m_hat, est.q_hat, est.p)
    return float(np.sum(terms.y * terms.y) / np.sum(sample.values) ** 2)


def beach_davidson_formula(
    *,
    p: float,
    mu: float,
    sigma2: float,
    gamma: float,
    eps2: float,
    q: float,
    n: int,
) -> float:
    """
    Beach-Davidson asymptotic variance of a Lorenz ordinate.

    Args:
        p: Probability mass at or below q
        mu: Mean of X
        sigma2: Variance of X
        gamma: E(X | X <= q)
        eps2: Var(X | X <= q)
        q: Quantile
        n: Sample size

    Returns:
        Variance of m-hat, clipped at zero
    """
    ratio = p * gamma / mu
    bracket = (
        sigma2 * p * gamma ** 2 / mu ** 2
        + eps2 * (1.0 - 2.0 * ratio)
        + (1.0 - p) * (q - gamma) ** 2
        - 2.0 * ratio * (q - gamma) * (mu - gamma)
    )
    return max(p * bracket / (n * mu ** 2), 0.0)


def variance_beach_davidson(sample: Sample, est: ShareEstimate) -> float:
    """
    Beach-Davidson variance with plug-in moments.

    p-hat is the observed fraction at or below q-hat; mean, variance and the
    conditional moments use divisor n.

    Raises:
        DegenerateConditional: No observation at or below q-hat
    """
    x = sample.values
    below = x[x <= est.q_hat]
    if below.size == 0:
        raise DegenerateConditional(f"No observations at or below q_hat={est.q_hat}")

    return beach_davidson_formula(
        p=below.size / sample.n,
        mu=float(np.mean(x)),
        sigma2=float(np.var(x)),
        gamma=float(np.mean(below)),
        eps2=float(np.var(below)),
        q=est.q_hat,
        n=sample.n,
    )


def variance_bootstrap(
    sample: Sample,
    query: ShareQuery,
    b: int,
    seed: "int | tuple[int, ...]",
    workers: int | None = None,
) -> float:
    """
    Nonparametric bootstrap variance of m-hat (q-hat re-estimated per resample).

    Args:
        sample: Observations
        query: p and quantile mode
        b: Number of resamples (>= 2)
        seed: Root seed or seed tuple; resample j uses the stream keyed by (*seed, j)
        workers: Threads for resampling (result does not depend on it)

    Returns:
        Sample variance (ddof=1) of the b resampled shares
    """
    from ..bootstrap import ResamplePlan, bootstrap_distribution

    plan = ResamplePlan(b=b, seed=seed)
    replicates = bootstrap_distribution(sample, query.p, plan, fixed_q=query.fixed_q, workers=workers)
    return float(np.var(replicates, ddof=1))


def density_at_quantile(sample: Sample, q: float) -> float:
    """
    Gaussian kernel density estimate of f(q), bandwidth 1.06 * sd * n^(-1/5).

    Approximate; only the off-diagonal and (2,2) entries of
    joint_covariance use it.
    """
    if sample.is_degenerate():
        raise NonPositiveDensity("Cannot estimate a density from a constant sample")
    kde = stats.gaussian_kde(sample.values, bw_method=1.06 * sample.n ** (-0.2))
    return float(kde(q)[0])


def joint_covariance(sample: Sample, est: ShareEstimate, density_at_q: float) -> np.ndarray:
    """
    Plug-in covariance matrix of (m-hat, q-hat), already divided by n.

    Args:
        sample: Observations
        est: Point estimate
        density_at_q: f(q), analytic or from density_at_quantile

    Returns:
        2x2 symmetric array [[V(m), C], [C, V(q)]]

    Raises:
        NonPositiveDensity: density_at_q is not a positive finite number
    """
    f = float(density_at_q)
    if not np.isfinite(f) or f <= 0:
        raise NonPositiveDensity(f"Density at the quantile must be positive, got {density_at_q}")

    n = sample.n
    q = est.q_hat
    mu = float(np.mean(sample.values))
    terms = influence_terms(sample, est.m_hat, q, est.p)
    e_yz = float(np.mean(terms.y * terms.z))
    e_z2 = float(np.mean(terms.z * terms.z))

    v_m = variance_proposed(sample, est)
    v_q = est.p * (1.0 - est.p) / (n * f ** 2)
    # Row (-1/mu, q/mu) of the inverse Jacobian against row (0, 1/f)
    c_mq = -(e_yz - q * e_z2) / (n * mu * f)
    return np.array([[v_m, c_mq], [c_mq, v_q]])


def estimate_variance(
    method: "str | VarianceMethod",
    sample: Sample,
    est: ShareEstimate,
    query: ShareQuery,
    bootstrap_b: int = 200,
    seed: "int | tuple[int, ...]" = 0,
    workers: int | None = None,
) -> float:
    """Dispatch to the estimator for one variance method."""
    method = VarianceMethod.parse(method)
    if method is VarianceMethod.PROPOSED:
        return variance_proposed(sample, est)
    if method is VarianceMethod.FIXED_Q:
        return variance_fixed_q(sample, est)
    if method is VarianceMethod.BEACH_DAVIDSON:
        return variance_beach_davidson(sample, est)
    return variance_bootstrap(sample, query, bootstrap_b, seed, workers)


def infer_share(
    sample: Sample,
    query: ShareQuery,
    methods: Iterable["str | VarianceMethod"] = DEFAULT_METHODS,
    bootstrap_b: int = 200,
    seed: "int | tuple[int, ...]" = 0,
    workers: int | None = None,
) -> ShareEstimate:
    """
    Point estimate plus every requested variance.

    Args:
        sample: Observations
        query: p and quantile mode
        methods: Variance methods to attach
        bootstrap_b: Resamples for the bootstrap method
        seed: Root seed for the bootstrap method
        workers: Threads for the bootstrap method

    Returns:
        ShareEstimate carrying one variance per requested method
    """
    est = estimate_share(sample, query)
    for method in dict.fromkeys(VarianceMethod.parse(m) for m in methods):
        value = estimate_variance(method, sample, est, query, bootstrap_b, seed, workers)
        est = est.with_variance(method, value)
    return est

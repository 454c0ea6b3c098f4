"""
Population ground truth for the bottom-p share and its variances.

Every quantity is available from closed-form incomplete moments
(method="closed") or from adaptive quadrature of the density
(method="quad"); the two back ends cross-check each other in tests.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from ..errors import InvalidQuery
from ..estimators.variance import beach_davidson_formula
from .models import DistributionModel, Family

CLOSED = "closed"
QUAD = "quad"

QUAD_EPSREL = 1e-12
QUAD_LIMIT = 500

H_SERIES_CUTOFF = 1e-4
_H_SERIES_TERMS = 12


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InvalidQuery(f"p must lie strictly between 0 and 1, got {p}")
    return p


def population_quantile(model: DistributionModel, p: float) -> float:
    """F^{-1}(p) in closed form."""
    p = _check_p(p)
    if model.family is Family.LOG_NORMAL:
        return math.exp(model.mu_ln + model.sigma_ln * float(special.ndtri(p)))
    if model.family is Family.EXPONENTIAL:
        return -math.log1p(-p) / model.rate
    return p * model.upper


def population_share(model: DistributionModel, p: float) -> float:
    """m(q) = E(X 1{X <= q}) / E(X) at q = F^{-1}(p)."""
    p = _check_p(p)
    if model.family is Family.LOG_NORMAL:
        return float(special.ndtr(special.ndtri(p) - model.sigma_ln))
    if model.family is Family.EXPONENTIAL:
        return float(special.gammainc(2, -math.log1p(-p)))
    return p * p


def integrate_density(
    model: DistributionModel,
    integrand: Callable[[float], float],
    lower: float = 0.0,
    upper: float | None = None,
) -> float:
    """
    Adaptive Gauss-Kronrod integral of integrand(x) f(x) over (lower, upper].

    An infinite upper limit is handled by QUADPACK's substitution.
    """
    upper = model.support_upper if upper is None else min(upper, model.support_upper)
    if upper <= lower:
        return 0.0
    pdf = model.frozen.pdf
    value, _ = integrate.quad(
        lambda x: integrand(x) * pdf(x),
        lower,
        upper,
        epsabs=0.0,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    return float(value)


@dataclass(frozen=True)
class PopulationMoments:
    """Moments entering every variance formula, at q = F^{-1}(p)."""
    p: float
    q: float
    mu: float
    ex2: float
    share: float
    ex2_below: float
    density: float

    @property
    def sigma2(self) -> float:
        return self.ex2 - self.mu ** 2

    @property
    def gamma(self) -> float:
        """E(X | X <= q)."""
        return self.share * self.mu / self.p

    @property
    def eps2(self) -> float:
        """Var(X | X <= q)."""
        return self.ex2_below / self.p - self.gamma ** 2

    @property
    def e_y2(self) -> float:
        return self.share ** 2 * self.ex2 - (2.0 * self.share - 1.0) * self.ex2_below

    @property
    def e_yz(self) -> float:
        return self.share * (1.0 - self.share) * self.mu

    @property
    def e_z2(self) -> float:
        return self.p * (1.0 - self.p)

    @property
    def e_residual2(self) -> float:
        """E{(Y - q Z)^2}."""
        return self.e_y2 - 2.0 * self.q * self.e_yz + self.q ** 2 * self.e_z2


def population_moments(model: DistributionModel, p: float, method: str = CLOSED) -> PopulationMoments:
    """
    Collect the population moments at the p-quantile.

    Args:
        model: Distribution
        p: Probability in (0, 1)
        method: "closed" for closed-form incomplete moments, "quad" for
            numerical integration of the density

    Returns:
        PopulationMoments
    """
    p = _check_p(p)
    q = population_quantile(model, p)

    if method == CLOSED:
        mu = model.raw_moment(1)
        ex2 = model.raw_moment(2)
        below = model.incomplete_moment(1, q)
        ex2_below = model.incomplete_moment(2, q)
    elif method == QUAD:
        # Split at q so the kink of the indicator sits on an endpoint
        below = integrate_density(model, lambda x: x, upper=q)
        mu = below + integrate_density(model, lambda x: x, lower=q)
        ex2_below = integrate_density(model, lambda x: x * x, upper=q)
        ex2 = ex2_below + integrate_density(model, lambda x: x * x, lower=q)
    else:
        raise ValueError(f"Unknown moment method {method!r}")

    return PopulationMoments(
        p=p,
        q=q,
        mu=mu,
        ex2=ex2,
        share=below / mu,
        ex2_below=ex2_below,
        density=float(model.pdf(q)),
    )


def population_variance_proposed(model: DistributionModel, p: float, n: int, method: str = CLOSED) -> float:
    """Asymptotic variance of m-hat(q-hat): E{(Y - qZ)^2} / (n mu^2)."""
    mom = population_moments(model, p, method)
    return mom.e_residual2 / (n * mom.mu ** 2)


def population_variance_fixed_q(model: DistributionModel, p: float, n: int, method: str = CLOSED) -> float:
    """Asymptotic variance when q is known: E(Y^2) / (n mu^2)."""
    mom = population_moments(model, p, method)
    return mom.e_y2 / (n * mom.mu ** 2)


def population_variance_beach_davidson(model: DistributionModel, p: float, n: int, method: str = CLOSED) -> float:
    """Beach-Davidson variance evaluated with exact population moments."""
    mom = population_moments(model, p, method)
    return beach_davidson_formula(
        p=mom.p,
        mu=mom.mu,
        sigma2=mom.sigma2,
        gamma=mom.gamma,
        eps2=mom.eps2,
        q=mom.q,
        n=n,
    )


def population_quantile_variance(model: DistributionModel, p: float, n: int) -> float:
    """Textbook variance of the sample quantile, p(1-p) / (n f(q)^2)."""
    p = _check_p(p)
    f = float(model.pdf(population_quantile(model, p)))
    return p * (1.0 - p) / (n * f * f)


def variance_gap(model: DistributionModel, p: float, n: int) -> float:
    """
    Fixed-q variance minus proposed variance.

    q [2 m (1 - m) mu - q p (1 - p)] / (n mu^2)
    """
    mom = population_moments(model, p)
    q, m, mu = mom.q, mom.share, mom.mu
    return q * (2.0 * m * (1.0 - m) * mu - q * mom.p * (1.0 - mom.p)) / (n * mu ** 2)


def _h_series(t: float) -> float:
    # h(t) = sum_{k>=3} (k + 2) t^k / k!
    return sum((k + 2) * t ** k / math.factorial(k) for k in range(3, 3 + _H_SERIES_TERMS))


def h_function(t: float) -> float:
    """
    h(t) = 2(e^t - 1 - t)(1 + t) - t(e^t - 1), non-negative for t >= 0.

    Below H_SERIES_CUTOFF the power series replaces the direct form, which
    cancels catastrophically near 0.
    """
    if t < 0:
        raise ValueError(f"h is defined for t >= 0, got {t}")
    if t < H_SERIES_CUTOFF:
        return _h_series(t)
    em1 = math.expm1(t)
    return 2.0 * (em1 - t) * (1.0 + t) - t * em1


def h_derivative(t: float) -> float:
    """h'(t) = t e^t + 3 e^t - 4t - 3."""
    return t * math.exp(t) + 3.0 * math.expm1(t) - 4.0 * t


def h_second_derivative(t: float) -> float:
    """h''(t) = t e^t + 4 e^t - 4."""
    return t * math.exp(t) + 4.0 * math.expm1(t)


def h_grid(lower: float = 1e-6, upper: float = 50.0, num: int = 400) -> np.ndarray:
    """Log-spaced grid of t values with h evaluated on it, shape (num, 2)."""
    ts = np.geomspace(lower, upper, num)
    return np.column_stack([ts, [h_function(float(t)) for t in ts]])

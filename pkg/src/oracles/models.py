"""
Parametric families with closed-form population quantities.

Log-normal parameters are named mu_ln / sigma_ln to keep them apart from the
mean and variance of X itself.
"""

import math
from dataclasses import dataclass
from enum import Enum

from scipy import special, stats

from ..errors import InvalidConfig


class Family(str, Enum):
    LOG_NORMAL = "log_normal"
    EXPONENTIAL = "exponential"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class DistributionModel:
    """
    One of LN(mu_ln, sigma_ln), Exp(rate) or Unif(0, upper).

    Only the parameters of the chosen family are meaningful; use the
    log_normal / exponential / uniform constructors.
    """
    family: Family
    mu_ln: float = 0.0
    sigma_ln: float = 1.0
    rate: float = 1.0
    upper: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        checks = {
            Family.LOG_NORMAL: ("sigma_ln", self.sigma_ln),
            Family.EXPONENTIAL: ("rate", self.rate),
            Family.UNIFORM: ("upper", self.upper),
        }
        name, value = checks[self.family]
        if not math.isfinite(value) or value <= 0:
            raise InvalidConfig(f"{self.family.value} needs {name} > 0, got {value}")
        if not math.isfinite(self.mu_ln):
            raise InvalidConfig(f"mu_ln must be finite, got {self.mu_ln}")

    @classmethod
    def log_normal(cls, mu_ln: float, sigma_ln: float) -> "DistributionModel":
        return cls(Family.LOG_NORMAL, mu_ln=float(mu_ln), sigma_ln=float(sigma_ln))

    @classmethod
    def exponential(cls, rate: float) -> "DistributionModel":
        return cls(Family.EXPONENTIAL, rate=float(rate))

    @classmethod
    def uniform(cls, upper: float) -> "DistributionModel":
        return cls(Family.UNIFORM, upper=float(upper))

    @property
    def label(self) -> str:
        if self.family is Family.LOG_NORMAL:
            return f"LN({self.mu_ln:g}, {self.sigma_ln:g})"
        if self.family is Family.EXPONENTIAL:
            return f"Exp({self.rate:g})"
        return f"Unif(0, {self.upper:g})"

    @property
    def frozen(self):
        """The matching scipy.stats frozen distribution."""
        if self.family is Family.LOG_NORMAL:
            return stats.lognorm(s=self.sigma_ln, scale=math.exp(self.mu_ln))
        if self.family is Family.EXPONENTIAL:
            return stats.expon(scale=1.0 / self.rate)
        return stats.uniform(loc=0.0, scale=self.upper)

    @property
    def support_upper(self) -> float:
        return self.upper if self.family is Family.UNIFORM else math.inf

    @property
    def mean(self) -> float:
        return self.raw_moment(1)

    @property
    def variance(self) -> float:
        return self.raw_moment(2) - self.mean ** 2

    def pdf(self, x):
        return self.frozen.pdf(x)

    def ppf(self, u):
        return self.frozen.ppf(u)

    def raw_moment(self, k: int) -> float:
        """E(X^k)."""
        if self.family is Family.LOG_NORMAL:
            return math.exp(k * self.mu_ln + 0.5 * (k * self.sigma_ln) ** 2)
        if self.family is Family.EXPONENTIAL:
            return math.factorial(k) / self.rate ** k
        return self.upper ** k / (k + 1)

    def incomplete_moment(self, k: int, q: float) -> float:
        """E(X^k 1{X <= q}) in closed form."""
        if q <= 0:
            return 0.0
        if self.family is Family.LOG_NORMAL:
            z = (math.log(q) - self.mu_ln - k * self.sigma_ln ** 2) / self.sigma_ln
            return self.raw_moment(k) * float(special.ndtr(z))
        if self.family is Family.EXPONENTIAL:
            # Regularised lower incomplete gamma stays accurate as q -> 0
            return self.raw_moment(k) * float(special.gammainc(k + 1, self.rate * q))
        q = min(q, self.upper)
        return q ** (k + 1) / ((k + 1) * self.upper)

    def to_dict(self) -> dict:
        params = {
            Family.LOG_NORMAL: {"mu_ln": self.mu_ln, "sigma_ln": self.sigma_ln},
            Family.EXPONENTIAL: {"rate": self.rate},
            Family.UNIFORM: {"upper": self.upper},
        }[self.family]
        return {"family": self.family.value, **params}

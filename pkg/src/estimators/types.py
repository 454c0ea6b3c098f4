"""
Domain types for bottom-p share estimation.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from ..errors import InvalidQuery, InvalidSample, MethodMissing


class VarianceMethod(str, Enum):
    """Variance estimators that can be attached to a ShareEstimate."""
    PROPOSED = "proposed"
    FIXED_Q = "fixed_q"
    BEACH_DAVIDSON = "beach_davidson"
    BOOTSTRAP = "bootstrap"

    @classmethod
    def parse(cls, value: "str | VarianceMethod") -> "VarianceMethod":
        """Accept either a member or its string tag."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise InvalidQuery(f"Unknown variance method {value!r} (choose from {choices})") from None


ESTIMATE_FROM_SAMPLE = "estimate_from_sample"
FIXED_KNOWN = "fixed_known"


@dataclass(frozen=True, eq=False)
class Sample:
    """Strictly positive, finite observations (at least two)."""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise InvalidSample(f"Sample must be one-dimensional, got shape {values.shape}")
        if values.size < 2:
            raise InvalidSample(f"Sample needs at least 2 observations, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise InvalidSample("Sample contains NaN or infinite values")
        if np.any(values <= 0):
            bad = int(np.count_nonzero(values <= 0))
            raise InvalidSample(f"Sample contains {bad} non-positive values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "Sample":
        return cls(np.fromiter(values, dtype=np.float64))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def is_degenerate(self) -> bool:
        """True when every observation has the same value."""
        return bool(self.values.min() == self.values.max())

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class ShareQuery:
    """Which share to estimate: p, plus an optional known quantile."""
    p: float
    fixed_q: float | None = None

    def __post_init__(self):
        p = float(self.p)
        if not 0.0 < p < 1.0:
            raise InvalidQuery(f"p must lie strictly between 0 and 1, got {self.p}")
        object.__setattr__(self, "p", p)
        if self.fixed_q is not None:
            q = float(self.fixed_q)
            if not np.isfinite(q) or q <= 0:
                raise InvalidQuery(f"Fixed quantile must be positive and finite, got {self.fixed_q}")
            object.__setattr__(self, "fixed_q", q)

    @classmethod
    def fixed(cls, p: float, q: float) -> "ShareQuery":
        return cls(p=p, fixed_q=q)

    @property
    def quantile_mode(self) -> str:
        return ESTIMATE_FROM_SAMPLE if self.fixed_q is None else FIXED_KNOWN


@dataclass(frozen=True)
class ShareEstimate:
    """Point estimate of the bottom-p share and any attached variances."""
    m_hat: float
    q_hat: float
    n: int
    p: float
    variances: Mapping[VarianceMethod, float] = field(default_factory=dict)
    quantile_mode: str = ESTIMATE_FROM_SAMPLE
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.m_hat <= 1.0:
            raise ValueError(f"m_hat must lie in [0, 1], got {self.m_hat}")
        variances = {VarianceMethod.parse(k): float(v) for k, v in self.variances.items()}
        for method, value in variances.items():
            if not value >= 0.0:
                raise ValueError(f"{method.value} variance must be non-negative, got {value}")
        object.__setattr__(self, "variances", variances)

    def with_variance(self, method: "str | VarianceMethod", value: float) -> "ShareEstimate":
        """Return a copy with one more variance attached."""
        variances = dict(self.variances)
        variances[VarianceMethod.parse(method)] = value
        return replace(self, variances=variances)

    def with_flag(self, flag: str) -> "ShareEstimate":
        if flag in self.flags:
            return self
        return replace(self, flags=self.flags + (flag,))

    def variance(self, method: "str | VarianceMethod") -> float:
        method = VarianceMethod.parse(method)
        if method not in self.variances:
            raise MethodMissing(f"Estimate has no {method.value} variance")
        return self.variances[method]

    def standard_error(self, method: "str | VarianceMethod") -> float:
        return float(np.sqrt(self.variance(method)))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "q_hat": self.q_hat,
            "m_hat": self.m_hat,
            "quantile_mode": self.quantile_mode,
            "variances": {m.value: v for m, v in self.variances.items()},
            "flags": list(self.flags),
        }


@dataclass(frozen=True, eq=False)
class InfluenceTerms:
    """Per-observation estimating-equation terms Y-hat and Z-hat."""
    y: np.ndarray
    z: np.ndarray


@dataclass(frozen=True)
class ConfidenceInterval:
    """Wald interval m_hat +/- z * sqrt(variance)."""
    lower: float
    upper: float
    level: float
    method: VarianceMethod

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "level": self.level,
            "lower": self.lower,
            "upper": self.upper,
        }

from .types import (
    ConfidenceInterval,
    InfluenceTerms,
    Sample,
    ShareEstimate,
    ShareQuery,
    VarianceMethod,
)
from .share import (
    estimate_quantile,
    estimate_share,
    influence_terms,
    order_index,
)
from .variance import (
    beach_davidson_formula,
    density_at_quantile,
    estimate_variance,
    infer_share,
    joint_covariance,
    variance_beach_davidson,
    variance_bootstrap,
    variance_fixed_q,
    variance_proposed,
)
from .inference import (
    confidence_interval,
    normal_critical_value,
    two_sample_test,
)

__all__ = [
    "ConfidenceInterval",
    "InfluenceTerms",
    "Sample",
    "ShareEstimate",
    "ShareQuery",
    "VarianceMethod",
    "estimate_quantile",
    "estimate_share",
    "influence_terms",
    "order_index",
    "beach_davidson_formula",
    "density_at_quantile",
    "estimate_variance",
    "infer_share",
    "joint_covariance",
    "variance_beach_davidson",
    "variance_bootstrap",
    "variance_fixed_q",
    "variance_proposed",
    "confidence_interval",
    "normal_critical_value",
    "two_sample_test",
]

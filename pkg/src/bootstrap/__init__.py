from .resample import (
    ResamplePlan,
    bootstrap_distribution,
    resample_indices,
    resample_rng,
)

__all__ = [
    "ResamplePlan",
    "bootstrap_distribution",
    "resample_indices",
    "resample_rng",
]

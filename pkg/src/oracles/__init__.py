from .models import DistributionModel, Family
from .population import (
    CLOSED,
    QUAD,
    PopulationMoments,
    h_derivative,
    h_function,
    h_grid,
    h_second_derivative,
    integrate_density,
    population_moments,
    population_quantile,
    population_quantile_variance,
    population_share,
    population_variance_beach_davidson,
    population_variance_fixed_q,
    population_variance_proposed,
    variance_gap,
)

__all__ = [
    "DistributionModel",
    "Family",
    "CLOSED",
    "QUAD",
    "PopulationMoments",
    "h_derivative",
    "h_function",
    "h_grid",
    "h_second_derivative",
    "integrate_density",
    "population_moments",
    "population_quantile",
    "population_quantile_variance",
    "population_share",
    "population_variance_beach_davidson",
    "population_variance_fixed_q",
    "population_variance_proposed",
    "variance_gap",
]

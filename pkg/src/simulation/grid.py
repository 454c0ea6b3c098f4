"""
The standard simulation grid: three log-normal and three exponential
models, each at n = 2000, 5000 and 10000, p = 0.75.
"""

from ..estimators.types import VarianceMethod
from ..oracles.models import DistributionModel
from .engine import ALL_METHODS, SimulationConfig

GRID_CASES = [
    DistributionModel.log_normal(0.4, 0.5),
    DistributionModel.log_normal(-0.3, 1.0),
    DistributionModel.log_normal(0.6, 0.5),
    DistributionModel.exponential(0.5),
    DistributionModel.exponential(1.0),
    DistributionModel.exponential(2.0),
]

GRID_SIZES = (2000, 5000, 10000)
DESK_SIZES = (2000, 10000)
GRID_P = 0.75

DESK_REPLICATIONS = 2000
FULL_REPLICATIONS = 5000


def grid_configs(
    seed: int,
    full: bool = False,
    bootstrap_b: int = 200,
    methods: tuple[VarianceMethod, ...] = ALL_METHODS,
    replications: int | None = None,
) -> list[SimulationConfig]:
    """
    Every (model, n) cell of the grid.

    Args:
        seed: Root seed; cell i uses seed + i so cells are independent
        full: All three sizes at L=5000 instead of the desk-scale grid
        bootstrap_b: Resamples per replication
        methods: Variance methods to evaluate
        replications: Override L

    Returns:
        Configs in case-major order
    """
    sizes = GRID_SIZES if full else DESK_SIZES
    if replications is None:
        replications = FULL_REPLICATIONS if full else DESK_REPLICATIONS

    configs = []
    for model in GRID_CASES:
        for n in sizes:
            configs.append(
                SimulationConfig(
                    model=model,
                    n=n,
                    p=GRID_P,
                    replications=replications,
                    bootstrap_b=bootstrap_b,
                    seed=seed + len(configs),
                    methods=methods,
                )
            )
    return configs

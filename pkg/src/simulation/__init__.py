from .engine import (
    ALL_METHODS,
    SimulationConfig,
    SimulationReport,
    TimingReport,
    run_simulation,
    run_timing,
    sample_from,
    stream_rng,
    uniform_open,
)
from .grid import GRID_CASES, GRID_P, GRID_SIZES, grid_configs
from .reporting import SCHEMA_VERSION, reports_to_json, simulation_table, timing_table

__all__ = [
    "ALL_METHODS",
    "SimulationConfig",
    "SimulationReport",
    "TimingReport",
    "run_simulation",
    "run_timing",
    "sample_from",
    "stream_rng",
    "uniform_open",
    "GRID_CASES",
    "GRID_P",
    "GRID_SIZES",
    "grid_configs",
    "SCHEMA_VERSION",
    "reports_to_json",
    "simulation_table",
    "timing_table",
]

"""
Monte Carlo harness: relative bias and coverage of the variance estimators.

Replication r draws its sample from the stream keyed by (seed, r, 0) and its
bootstrap resamples from (seed, r, 1, j), so results do not depend on the
number of worker processes or the order replications finish in.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from ..errors import InvalidConfig
from ..estimators.inference import normal_critical_value
from ..estimators.share import checked_order_index, estimate_share
from ..estimators.types import Sample, ShareQuery, VarianceMethod
from ..estimators.variance import estimate_variance
from ..oracles.models import DistributionModel
from ..oracles.population import population_share, population_variance_proposed

logger = logging.getLogger(__name__)

SAMPLE_STREAM = 0
BOOTSTRAP_STREAM = 1
TIMING_STREAM = 2

MIN_REPLICATIONS = 100
MIN_TIMING_REPEATS = 10

ALL_METHODS = (
    VarianceMethod.PROPOSED,
    VarianceMethod.FIXED_Q,
    VarianceMethod.BOOTSTRAP,
)

_DOUBLE_STEPS = 2 ** 53


def uniform_open(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform draws on the open interval (0, 1), never exactly 0 or 1."""
    return (rng.integers(0, _DOUBLE_STEPS, size=size, dtype=np.int64) + 0.5) / _DOUBLE_STEPS


def stream_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([seed, *key])


def sample_from(model: DistributionModel, n: int, rng: np.random.Generator) -> Sample:
    """n i.i.d. draws from model by inverse-CDF sampling."""
    if n < 2:
        raise InvalidConfig(f"Need n >= 2 draws, got {n}")
    return Sample(np.asarray(model.ppf(uniform_open(rng, n)), dtype=np.float64))


@dataclass(frozen=True)
class SimulationConfig:
    """One cell of the simulation grid."""
    model: DistributionModel
    n: int
    p: float = 0.75
    replications: int = 2000
    bootstrap_b: int = 200
    seed: int = 0
    methods: tuple[VarianceMethod, ...] = ALL_METHODS
    level: float = 0.95

    def __post_init__(self):
        methods = tuple(dict.fromkeys(VarianceMethod.parse(m) for m in self.methods))
        object.__setattr__(self, "methods", methods)
        if not methods:
            raise InvalidConfig("At least one variance method is required")
        if self.replications < MIN_REPLICATIONS:
            raise InvalidConfig(f"Coverage needs at least {MIN_REPLICATIONS} replications, got {self.replications}")
        if VarianceMethod.BOOTSTRAP in methods and self.bootstrap_b < 2:
            raise InvalidConfig(f"Bootstrap needs b >= 2 resamples, got {self.bootstrap_b}")
        if self.seed < 0:
            raise InvalidConfig(f"Seed must be non-negative, got {self.seed}")
        # Raises QuantileIndexZero before any work is done
        checked_order_index(self.n, self.p)
        normal_critical_value(self.level)

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "case": self.model.label,
            "n": self.n,
            "p": self.p,
            "replications": self.replications,
            "bootstrap_b": self.bootstrap_b,
            "seed": self.seed,
            "methods": [m.value for m in self.methods],
            "level": self.level,
        }


@dataclass(frozen=True)
class SimulationReport:
    """
    Aggregates over L replications.

    true_variance is the sampling variance (ddof=1) of the L point
    estimates; analytic_variance is the population proposed variance at n.
    """
    config: SimulationConfig
    true_m: float
    true_variance: float
    analytic_variance: float
    mean_m_hat: float
    mean_variance: dict[VarianceMethod, float]
    relative_bias: dict[VarianceMethod, float]
    coverage: dict[VarianceMethod, float]
    mean_runtime: dict[VarianceMethod, float] | None = field(default=None)

    def to_dict(self) -> dict:
        result = {
            "config": self.config.to_dict(),
            "true_m": self.true_m,
            "true_variance": self.true_variance,
            "analytic_variance": self.analytic_variance,
            "mean_m_hat": self.mean_m_hat,
            "mean_variance": {m.value: v for m, v in self.mean_variance.items()},
            "relative_bias": {m.value: v for m, v in self.relative_bias.items()},
            "coverage": {m.value: v for m, v in self.coverage.items()},
        }
        if self.mean_runtime is not None:
            result["mean_runtime"] = {m.value: v for m, v in self.mean_runtime.items()}
        return result


def _replicate(config: SimulationConfig, true_m: float, rep: int, record_timing: bool = False) -> np.ndarray:
    """
    One replication as a flat row.

    Row layout: [m_hat, variance per method, covered per method, seconds per method].
    """
    sample = sample_from(config.model, config.n, stream_rng(config.seed, rep, SAMPLE_STREAM))
    query = ShareQuery(config.p)
    est = estimate_share(sample, query)
    z = normal_critical_value(config.level)

    k = len(config.methods)
    row = np.zeros(1 + 3 * k)
    row[0] = est.m_hat
    for i, method in enumerate(config.methods):
        start = time.perf_counter()
        variance = estimate_variance(
            method,
            sample,
            est,
            query,
            bootstrap_b=config.bootstrap_b,
            seed=(config.seed, rep, BOOTSTRAP_STREAM),
        )
        elapsed = time.perf_counter() - start
        row[1 + i] = variance
        row[1 + k + i] = abs(est.m_hat - true_m) <= z * np.sqrt(variance)
        row[1 + 2 * k + i] = elapsed if record_timing else 0.0
    return row


def _replicate_block(config: SimulationConfig, true_m: float, record_timing: bool, reps: range) -> np.ndarray:
    return np.vstack([_replicate(config, true_m, rep, record_timing) for rep in reps])


def _blocks(total: int, size: int) -> list[range]:
    return [range(start, min(start + size, total)) for start in range(0, total, size)]


def run_simulation(
    config: SimulationConfig,
    workers: int | None = None,
    record_timing: bool = False,
) -> SimulationReport:
    """
    Run L replications and aggregate them.

    Args:
        config: Model, n, p, L, b, seed and methods
        workers: Processes to spread replications over (results do not
            depend on it)
        record_timing: Also record per-method wall-clock means; off by
            default so equal seeds give identical reports

    Returns:
        SimulationReport
    """
    true_m = population_share(config.model, config.p)
    blocks = _blocks(config.replications, max(1, config.replications // 10))
    work = partial(_replicate_block, config, true_m, record_timing)

    logger.info(
        "Simulating %s n=%d p=%g L=%d methods=%s",
        config.model.label,
        config.n,
        config.p,
        config.replications,
        ",".join(m.value for m in config.methods),
    )
    parts = []
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for block, part in zip(blocks, pool.map(work, blocks)):
                parts.append(part)
                logger.info("Finished %d/%d replications", block.stop, config.replications)
    else:
        for block in blocks:
            parts.append(work(block))
            logger.info("Finished %d/%d replications", block.stop, config.replications)
    rows = np.vstack(parts)

    k = len(config.methods)
    m_hats = rows[:, 0]
    true_variance = float(np.var(m_hats, ddof=1))
    mean_variance = {m: float(rows[:, 1 + i].mean()) for i, m in enumerate(config.methods)}
    relative_bias = {m: (v - true_variance) / true_variance for m, v in mean_variance.items()}
    coverage = {m: float(rows[:, 1 + k + i].mean()) for i, m in enumerate(config.methods)}
    mean_runtime = (
        {m: float(rows[:, 1 + 2 * k + i].mean()) for i, m in enumerate(config.methods)}
        if record_timing
        else None
    )

    return SimulationReport(
        config=config,
        true_m=true_m,
        true_variance=true_variance,
        analytic_variance=population_variance_proposed(config.model, config.p, config.n),
        mean_m_hat=float(m_hats.mean()),
        mean_variance=mean_variance,
        relative_bias=relative_bias,
        coverage=coverage,
        mean_runtime=mean_runtime,
    )


@dataclass(frozen=True)
class TimingReport:
    """Mean wall-clock seconds per variance method (point estimate included)."""
    config: SimulationConfig
    repeats: int
    mean_runtime: dict[VarianceMethod, float]

    @property
    def bootstrap_ratio(self) -> float | None:
        """Bootstrap time over proposed time, when both were measured."""
        boot = self.mean_runtime.get(VarianceMethod.BOOTSTRAP)
        proposed = self.mean_runtime.get(VarianceMethod.PROPOSED)
        if boot is None or not proposed:
            return None
        return boot / proposed

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "repeats": self.repeats,
            "mean_runtime": {m.value: v for m, v in self.mean_runtime.items()},
            "bootstrap_ratio": self.bootstrap_ratio,
        }


def run_timing(config: SimulationConfig, repeats: int = 100) -> TimingReport:
    """
    Time each method on freshly drawn samples.

    Args:
        config: Model, n, p, b and methods (replications is not used)
        repeats: Number of samples to time on (>= 10)

    Returns:
        TimingReport with per-method means and the bootstrap/proposed ratio
    """
    if repeats < MIN_TIMING_REPEATS:
        raise InvalidConfig(f"Timing needs at least {MIN_TIMING_REPEATS} repeats, got {repeats}")

    query = ShareQuery(config.p)
    totals = dict.fromkeys(config.methods, 0.0)
    for rep in range(repeats):
        sample = sample_from(config.model, config.n, stream_rng(config.seed, rep, TIMING_STREAM))
        for method in config.methods:
            start = time.perf_counter()
            est = estimate_share(sample, query)
            estimate_variance(
                method,
                sample,
                est,
                query,
                bootstrap_b=config.bootstrap_b,
                seed=(config.seed, rep, BOOTSTRAP_STREAM),
            )
            totals[method] += time.perf_counter() - start

    return TimingReport(
        config=config,
        repeats=repeats,
        mean_runtime={m: total / repeats for m, total in totals.items()},
    )

"""
Nonparametric bootstrap: reproducibility, replay and agreement with the closed form.
"""

import numpy as np
import pytest

from src.bootstrap import ResamplePlan, bootstrap_distribution, resample_indices
from src.errors import InvalidConfig, QuantileIndexZero
from src.estimators import Sample, ShareQuery, estimate_share, infer_share, variance_bootstrap
from src.oracles import DistributionModel
from src.simulation import sample_from, stream_rng


@pytest.mark.parametrize("kwargs", [
    {"b": 1, "seed": 0},
    {"b": 2.5, "seed": 0},
    {"b": 10, "seed": -1},
    {"b": 10, "seed": ()},
    {"b": 10, "seed": 0, "statistic": "gini"},
])
def test_plan_validation(kwargs):
    with pytest.raises(InvalidConfig):
        ResamplePlan(**kwargs)


def test_distribution_is_reproducible(hand_sample):
    plan = ResamplePlan(b=50, seed=42)
    first = bootstrap_distribution(hand_sample, 0.5, plan)
    second = bootstrap_distribution(hand_sample, 0.5, plan)
    assert first.shape == (50,)
    np.testing.assert_array_equal(first, second)


def test_statistics_replay_from_logged_indices(hand_sample):
    plan = ResamplePlan(b=3, seed=2024)
    stats = bootstrap_distribution(hand_sample, 0.5, plan)

    for j in range(3):
        idx = resample_indices(4, plan, j)
        assert idx.shape == (4,)
        replay = estimate_share(Sample(hand_sample.values[idx]), ShareQuery(0.5))
        assert stats[j] == replay.m_hat


def test_constant_sample_gives_constant_statistics():
    sample = Sample(np.array([5.0, 5.0, 5.0, 5.0]))
    stats = bootstrap_distribution(sample, 0.5, ResamplePlan(b=20, seed=1))
    # Every resample is [5, 5, 5, 5]; ties at q-hat count as below
    assert np.all(stats == 1.0)


def test_fixed_quantile_resamples_keep_threshold(hand_sample):
    plan = ResamplePlan(b=30, seed=3)
    stats = bootstrap_distribution(hand_sample, 0.5, plan, fixed_q=2.5)
    for j in range(30):
        values = hand_sample.values[resample_indices(4, plan, j)]
        assert stats[j] == pytest.approx(values[values <= 2.5].sum() / values.sum(), rel=1e-15)


def test_thread_count_does_not_change_replicates(rng):
    sample = Sample(rng.exponential(1.0, 500))
    plan = ResamplePlan(b=64, seed=9)
    serial = bootstrap_distribution(sample, 0.75, plan)
    threaded = bootstrap_distribution(sample, 0.75, plan, workers=4)
    np.testing.assert_array_equal(serial, threaded)
    assert variance_bootstrap(sample, ShareQuery(0.75), 64, 9) == variance_bootstrap(
        sample, ShareQuery(0.75), 64, 9, workers=3
    )


def test_tuple_seeds_give_independent_streams(rng):
    sample = Sample(rng.exponential(1.0, 200))
    a = bootstrap_distribution(sample, 0.75, ResamplePlan(b=10, seed=(1, 0)))
    b = bootstrap_distribution(sample, 0.75, ResamplePlan(b=10, seed=(1, 1)))
    assert not np.array_equal(a, b)


def test_quantile_index_zero_is_raised():
    with pytest.raises(QuantileIndexZero):
        bootstrap_distribution(Sample(np.array([1.0, 2.0])), 0.4, ResamplePlan(b=5, seed=0))


def test_bootstrap_attached_through_infer_share(hand_sample, hand_query):
    est = infer_share(hand_sample, hand_query, ["bootstrap"], bootstrap_b=40, seed=5)
    stats = bootstrap_distribution(hand_sample, 0.5, ResamplePlan(b=40, seed=5))
    assert est.variance("bootstrap") == pytest.approx(np.var(stats, ddof=1), rel=1e-15)


def test_single_sample_bootstrap_near_closed_form():
    sample = sample_from(DistributionModel.exponential(1.0), 2000, stream_rng(17, 0, 0))
    est = infer_share(sample, ShareQuery(0.75), ["proposed", "bootstrap"], bootstrap_b=200, seed=17)
    ratio = est.variance("bootstrap") / est.variance("proposed")
    # b = 200 leaves about 10% relative noise in the bootstrap variance
    assert 0.6 < ratio < 1.5


@pytest.mark.slow
def test_bootstrap_averages_to_closed_form():
    model = DistributionModel.exponential(1.0)
    query = ShareQuery(0.75)
    boot, proposed = [], []
    for rep in range(200):
        sample = sample_from(model, 2000, stream_rng(31, rep, 0))
        est = infer_share(sample, query, ["proposed", "bootstrap"], bootstrap_b=200, seed=(31, rep, 1))
        boot.append(est.variance("bootstrap"))
        proposed.append(est.variance("proposed"))
    assert np.mean(boot) == pytest.approx(np.mean(proposed), rel=0.05)


@pytest.mark.slow
def test_bootstrap_variance_stabilises_with_b():
    sample = sample_from(DistributionModel.log_normal(0.4, 0.5), 2000, stream_rng(41, 0, 0))
    query = ShareQuery(0.75)
    v_5000 = variance_bootstrap(sample, query, 5000, seed=41)
    v_10000 = variance_bootstrap(sample, query, 10000, seed=41)
    assert v_10000 == pytest.approx(v_5000, rel=0.05)

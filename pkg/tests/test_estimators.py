"""
Point estimate, closed-form variances, intervals and the two-sample test.
"""

import math

import numpy as np
import pytest

from conftest import HAND_FIXED_Q, HAND_M, HAND_PROPOSED, HAND_Q
from src.errors import (
    DegenerateConditional,
    DegenerateSampleWarning,
    InvalidQuery,
    InvalidSample,
    MethodMissing,
    NonPositiveDensity,
    PMismatch,
    QuantileIndexZero,
)
from src.estimators import (
    Sample,
    ShareEstimate,
    ShareQuery,
    VarianceMethod,
    confidence_interval,
    density_at_quantile,
    estimate_quantile,
    estimate_share,
    infer_share,
    influence_terms,
    joint_covariance,
    order_index,
    two_sample_test,
    variance_beach_davidson,
    variance_fixed_q,
    variance_proposed,
)
from src.estimators.share import DEGENERATE_FLAG
from src.estimators.types import FIXED_KNOWN
from src.oracles import DistributionModel, population_moments
from src.simulation import sample_from, stream_rng


# =============================================================================
# Order statistic and point estimate
# =============================================================================

def test_order_index_uses_decimal_p():
    assert order_index(4, 0.5) == 2
    assert order_index(100, 0.29) == 29
    assert order_index(2000, 0.75) == 1500


def test_hand_example_point_estimate(hand_sample, hand_query):
    est = estimate_share(hand_sample, hand_query)

    assert est.q_hat == HAND_Q
    assert est.m_hat == pytest.approx(HAND_M, abs=1e-12)
    assert est.n == 4
    assert est.flags == ()


def test_ties_at_quantile_are_included():
    est = estimate_share(Sample(np.array([1.0, 2.0, 2.0, 3.0])), ShareQuery(0.5))

    assert est.q_hat == 2.0
    assert est.m_hat == pytest.approx(5.0 / 8.0, abs=1e-15)


def test_fixed_quantile_mode(hand_sample):
    est = estimate_share(hand_sample, ShareQuery.fixed(0.5, 2.5))

    assert est.q_hat == 2.5
    assert est.m_hat == pytest.approx(0.3, abs=1e-15)
    assert est.quantile_mode == FIXED_KNOWN


def test_share_is_one_when_quantile_above_everything(hand_sample):
    est = estimate_share(hand_sample, ShareQuery.fixed(0.5, 10.0))
    assert est.m_hat == 1.0


def test_quantile_index_zero():
    with pytest.raises(QuantileIndexZero):
        estimate_share(Sample(np.array([1.0, 2.0])), ShareQuery(0.4))


def test_estimate_quantile_matches_sorted_order_statistic(rng):
    values = rng.lognormal(0.4, 0.5, size=1001)
    k = order_index(1001, 0.75)
    assert estimate_quantile(Sample(values), 0.75) == np.sort(values)[k - 1]


def test_share_non_decreasing_in_p(rng):
    sample = Sample(rng.lognormal(0.4, 0.5, size=1000))
    shares = [estimate_share(sample, ShareQuery(k / 100)).m_hat for k in range(1, 100)]
    assert all(a <= b for a, b in zip(shares, shares[1:]))


# =============================================================================
# Influence terms
# =============================================================================

def test_hand_example_influence_terms(hand_sample):
    terms = influence_terms(hand_sample, HAND_M, HAND_Q, 0.5)

    assert terms.y == pytest.approx([0.7, 1.4, -0.9, -1.2], abs=1e-12)
    assert terms.z == pytest.approx([0.5, 0.5, -0.5, -0.5], abs=1e-12)


def test_share_terms_sum_to_zero(rng):
    sample = Sample(rng.lognormal(0.4, 0.5, size=1_000_000))
    est = estimate_share(sample, ShareQuery(0.75))
    terms = influence_terms(sample, est.m_hat, est.q_hat, est.p)
    assert abs(terms.y.sum()) <= 1e-12 * sample.values.sum()


@pytest.mark.parametrize("p", [0.1, 0.5, 0.75])
def test_quantile_terms_take_two_values(rng, p):
    sample = Sample(rng.exponential(1.0, size=500))
    est = estimate_share(sample, ShareQuery(p))
    z = influence_terms(sample, est.m_hat, est.q_hat, p).z
    assert np.all((z == 1.0 - p) | (z == -p))
    assert (z == 1.0 - p).sum() == order_index(500, p)


def test_share_terms_vanish_when_share_is_one(hand_sample):
    est = estimate_share(hand_sample, ShareQuery.fixed(0.5, 10.0))
    terms = influence_terms(hand_sample, est.m_hat, est.q_hat, est.p)
    assert np.all(terms.y == 0.0)


@pytest.mark.parametrize(
    "values",
    [
        [1.0],
        [1.0, -1.0],
        [1.0, 0.0, 2.0],
        [1.0, float("nan")],
        [1.0, float("inf")],
        [[1.0, 2.0], [3.0, 4.0]],
    ],
)
def test_invalid_samples_rejected(values):
    with pytest.raises(InvalidSample):
        Sample(np.array(values))


@pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5])
def test_invalid_p_rejected(p):
    with pytest.raises(InvalidQuery):
        ShareQuery(p)


def test_sample_is_read_only(hand_sample):
    with pytest.raises(ValueError):
        hand_sample.values[0] = 10.0


def test_estimate_rejects_share_outside_unit_interval():
    with pytest.raises(ValueError):
        ShareEstimate(m_hat=1.5, q_hat=1.0, n=4, p=0.5)


# =============================================================================
# Variances
# =============================================================================

def test_hand_example_variances(hand_sample, hand_query):
    est = estimate_share(hand_sample, hand_query)

    assert variance_proposed(hand_sample, est) == pytest.approx(HAND_PROPOSED, abs=1e-12)
    assert variance_fixed_q(hand_sample, est) == pytest.approx(HAND_FIXED_Q, abs=1e-12)
    # p-hat = 0.5 here, so the plug-in Beach-Davidson value coincides
    assert variance_beach_davidson(hand_sample, est) == pytest.approx(HAND_PROPOSED, abs=1e-12)


def test_beach_davidson_equals_proposed_with_empirical_p(rng):
    sample = Sample(rng.lognormal(0.4, 0.5, size=5000))
    for p in (0.25, 0.5, 0.75, 0.9):
        est = estimate_share(sample, ShareQuery(p))
        bd = variance_beach_davidson(sample, est)
        proposed = variance_proposed(sample, est, empirical_p=True)
        assert bd == pytest.approx(proposed, rel=1e-8)


def test_beach_davidson_needs_mass_below_quantile(hand_sample):
    est = estimate_share(hand_sample, ShareQuery.fixed(0.5, 0.5))
    assert est.m_hat == 0.0
    with pytest.raises(DegenerateConditional):
        variance_beach_davidson(hand_sample, est)


def test_degenerate_sample_warns_and_returns_zero():
    sample = Sample(np.array([5.0, 5.0, 5.0, 5.0]))
    est = estimate_share(sample, ShareQuery(0.5))

    assert DEGENERATE_FLAG in est.flags
    assert est.m_hat == 1.0
    with pytest.warns(DegenerateSampleWarning):
        assert variance_proposed(sample, est) == 0.0
    with pytest.warns(DegenerateSampleWarning):
        assert variance_fixed_q(sample, est) == 0.0


def test_proposed_smaller_than_fixed_q_for_exponential(rng):
    sample = sample_from(DistributionModel.exponential(1.0), 5000, stream_rng(1, 0, 0))
    est = infer_share(sample, ShareQuery(0.75))
    assert est.variance("proposed") < est.variance("fixed_q")


def test_infer_share_deduplicates_methods(hand_sample, hand_query):
    est = infer_share(hand_sample, hand_query, ["proposed", VarianceMethod.PROPOSED, "fixed_q"])
    assert set(est.variances) == {VarianceMethod.PROPOSED, VarianceMethod.FIXED_Q}


def test_infer_share_rejects_unknown_method(hand_sample, hand_query):
    with pytest.raises(InvalidQuery):
        infer_share(hand_sample, hand_query, ["jackknife"])


def test_uniform_share_within_three_standard_errors():
    sample = sample_from(DistributionModel.uniform(1.0), 100_000, stream_rng(11, 0, 0))
    est = infer_share(sample, ShareQuery(0.75), ["proposed"])
    assert abs(est.m_hat - 0.5625) <= 3.0 * est.standard_error("proposed")


# =============================================================================
# Joint covariance and density
# =============================================================================

def test_joint_covariance_structure(rng):
    sample = Sample(rng.exponential(1.0, size=4000))
    est = estimate_share(sample, ShareQuery(0.75))
    f = 0.25  # Exp(1) density at its 0.75 quantile

    cov = joint_covariance(sample, est, f)

    assert cov.shape == (2, 2)
    assert cov[0, 1] == cov[1, 0]
    assert cov[0, 0] == pytest.approx(variance_proposed(sample, est), rel=1e-12)
    assert cov[1, 1] == pytest.approx(0.75 * 0.25 / (4000 * f * f), rel=1e-12)
    assert np.linalg.det(cov) > 0


def test_joint_covariance_matches_population_cross_term(rng, exp1):
    n = 400_000
    sample = Sample(rng.exponential(1.0, size=n))
    est = estimate_share(sample, ShareQuery(0.75))
    mom = population_moments(exp1, 0.75)
    expected = -(mom.e_yz - mom.q * mom.e_z2) / (n * mom.mu * mom.density)

    cov = joint_covariance(sample, est, mom.density)

    # m-hat and q-hat move together under Exp(1)
    assert expected > 0
    assert cov[0, 1] == pytest.approx(expected, rel=0.15)


def test_joint_covariance_uniform_quantile_entry(rng):
    n = 10_000
    sample = sample_from(DistributionModel.uniform(1.0), n, stream_rng(3, 0, 0))
    est = estimate_share(sample, ShareQuery(0.5))
    cov = joint_covariance(sample, est, 1.0)
    assert cov[1, 1] == pytest.approx(0.25 / n, rel=1e-12)


def test_joint_covariance_rejects_bad_density(hand_sample, hand_query):
    est = estimate_share(hand_sample, hand_query)
    for f in (0.0, -1.0, float("nan")):
        with pytest.raises(NonPositiveDensity):
            joint_covariance(hand_sample, est, f)


def test_kernel_density_close_to_truth(rng):
    sample = Sample(rng.exponential(1.0, size=20_000))
    q = math.log(4.0)
    assert density_at_quantile(sample, q) == pytest.approx(0.25, rel=0.1)


def test_kernel_density_refuses_constant_sample():
    with pytest.raises(NonPositiveDensity):
        density_at_quantile(Sample(np.array([2.0, 2.0, 2.0])), 2.0)


# =============================================================================
# Intervals and two-sample test
# =============================================================================

def test_confidence_interval_hand_example(hand_sample, hand_query):
    est = infer_share(hand_sample, hand_query)
    ci = confidence_interval(est, "proposed", 0.95)

    half = 1.959963984540054 * math.sqrt(HAND_PROPOSED)
    assert ci.lower == pytest.approx(HAND_M - half, abs=1e-12)
    assert ci.upper == pytest.approx(HAND_M + half, abs=1e-12)
    assert ci.contains(HAND_M)
    assert ci.method is VarianceMethod.PROPOSED


def test_confidence_interval_needs_attached_variance(hand_sample, hand_query):
    est = infer_share(hand_sample, hand_query, ["proposed"])
    with pytest.raises(MethodMissing):
        confidence_interval(est, "bootstrap")


def test_confidence_interval_rejects_bad_level(hand_sample, hand_query):
    est = infer_share(hand_sample, hand_query)
    with pytest.raises(InvalidQuery):
        confidence_interval(est, "proposed", 1.0)


def test_two_sample_identical_groups(hand_sample, hand_query):
    est = infer_share(hand_sample, hand_query)
    t, p_value = two_sample_test(est, est)
    assert t == 0.0
    assert p_value == pytest.approx(0.5)


def test_two_sample_statistic_value():
    a = ShareEstimate(m_hat=0.541, q_hat=1.0, n=100, p=0.75, variances={"proposed": 3e-6})
    b = ShareEstimate(m_hat=0.530, q_hat=1.0, n=100, p=0.75, variances={"proposed": 1.5e-5})
    t, p_value = two_sample_test(a, b)
    assert t == pytest.approx(0.011 / math.sqrt(1.8e-5), rel=1e-12)
    assert 0.0 < p_value < 0.01


def test_two_sample_zero_variance_gives_infinite_statistic():
    a = ShareEstimate(m_hat=0.6, q_hat=1.0, n=4, p=0.5, variances={"proposed": 0.0})
    b = ShareEstimate(m_hat=0.5, q_hat=1.0, n=4, p=0.5, variances={"proposed": 0.0})
    t, p_value = two_sample_test(a, b)
    assert t == math.inf
    assert p_value == 0.0


def test_two_sample_requires_same_p():
    a = ShareEstimate(m_hat=0.5, q_hat=1.0, n=4, p=0.5, variances={"proposed": 0.01})
    b = ShareEstimate(m_hat=0.5, q_hat=1.0, n=4, p=0.75, variances={"proposed": 0.01})
    with pytest.raises(PMismatch):
        two_sample_test(a, b)

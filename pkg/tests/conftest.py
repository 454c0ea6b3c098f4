"""
Shared fixtures: the four-point hand example and seeded generators.
"""

import numpy as np
import pytest

from src.estimators import Sample, ShareQuery
from src.oracles import DistributionModel

# [1, 2, 3, 4] at p = 0.5, worked by hand:
# q = X_(2) = 2, m = 3/10, Y = (.7, 1.4, -.9, -1.2), Z = (.5, .5, -.5, -.5)
# sum (Y - qZ)^2 = 0.30 and sum Y^2 = 4.7, both over (sum X)^2 = 100
HAND_Q = 2.0
HAND_M = 0.3
HAND_PROPOSED = 0.003
HAND_FIXED_Q = 0.047


@pytest.fixture
def hand_sample():
    return Sample(np.array([1.0, 2.0, 3.0, 4.0]))


@pytest.fixture
def hand_query():
    return ShareQuery(0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def exp1():
    return DistributionModel.exponential(1.0)


@pytest.fixture
def ln_base():
    return DistributionModel.log_normal(0.4, 0.5)


FAMILIES = [
    DistributionModel.log_normal(0.4, 0.5),
    DistributionModel.exponential(1.0),
    DistributionModel.uniform(1.0),
]


@pytest.fixture(params=FAMILIES, ids=lambda m: m.label)
def family(request):
    return request.param

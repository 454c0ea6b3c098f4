"""
Two-group comparison of bottom-p shares under both closed-form variances.
"""

from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyGroup, GroupCountNotTwo
from ..estimators.inference import two_sample_test
from ..estimators.types import Sample, ShareEstimate, ShareQuery, VarianceMethod
from ..estimators.variance import infer_share

COMPARE_METHODS = (VarianceMethod.PROPOSED, VarianceMethod.FIXED_Q)


@dataclass(frozen=True)
class GroupTest:
    method: VarianceMethod
    t_statistic: float
    p_value: float


@dataclass(frozen=True)
class ComparisonReport:
    """Per-group rows (group, size, m-hat, variances) and one test per method."""
    groups: tuple[str, str]
    estimates: tuple[ShareEstimate, ShareEstimate]
    tests: tuple[GroupTest, ...]
    level: float

    def test(self, method: "str | VarianceMethod") -> GroupTest:
        method = VarianceMethod.parse(method)
        return next(t for t in self.tests if t.method is method)

    def rejects(self, method: "str | VarianceMethod") -> bool:
        """One-sided rejection of equal shares at 1 - level."""
        return self.test(method).p_value < 1.0 - self.level

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "groups": [
                {"group": name, **est.to_dict()}
                for name, est in zip(self.groups, self.estimates)
            ],
            "tests": [
                {
                    "method": t.method.value,
                    "t_statistic": t.t_statistic,
                    "p_value": t.p_value,
                    "reject": self.rejects(t.method),
                }
                for t in self.tests
            ],
        }


def compare_groups(
    groups: dict[str, Sample],
    p: float,
    level: float = 0.95,
    order: Sequence[str] | None = None,
) -> ComparisonReport:
    """
    Estimate both groups and test m_first > m_second under each method.

    Args:
        groups: Exactly two samples keyed by group name
        p: Probability defining the share
        level: 1 - significance level of the reported decisions
        order: Group names in (first, second) order; file order otherwise

    Raises:
        GroupCountNotTwo: groups does not hold exactly two samples
        EmptyGroup: order names a group that is not present
    """
    if len(groups) != 2:
        names = ", ".join(groups) or "none"
        raise GroupCountNotTwo(f"Comparison needs exactly two groups, found {len(groups)} ({names})")

    query = ShareQuery(p)
    names = tuple(order) if order else tuple(groups)
    if sorted(names) != sorted(groups):
        raise EmptyGroup(f"Group order {list(names)} does not match groups {list(groups)}")
    first, second = (infer_share(groups[name], query, COMPARE_METHODS) for name in names)
    tests = tuple(
        GroupTest(method, *two_sample_test(first, second, method))
        for method in COMPARE_METHODS
    )
    return ComparisonReport(groups=names, estimates=(first, second), tests=tests, level=level)

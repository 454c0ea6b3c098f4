"""
Error hierarchy for share estimation.
Input problems exit with code 2, numeric failures with code 3.
"""

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERIC_ERROR = 3


class ShareError(Exception):
    """Base class for every failure raised by this package."""

    exit_code = EXIT_NUMERIC_ERROR


# =============================================================================
# Input errors (exit code 2)
# =============================================================================

class InputError(ShareError, ValueError):
    """The caller supplied data or arguments that cannot be used."""

    exit_code = EXIT_INPUT_ERROR


class InvalidSample(InputError):
    """Observations are not finite, not strictly positive, or too few."""


class InvalidQuery(InputError):
    """p outside (0, 1) or a non-positive fixed quantile."""


class InvalidConfig(InputError):
    """A simulation, resample plan or environment setting is out of range."""


class NonPositiveObservation(InputError):
    """A streamed observation was zero, negative or not finite."""


class ThresholdMismatch(InputError):
    """Two accumulators were built against different (q, p)."""


class MethodMissing(InputError):
    """The requested variance method is absent from an estimate."""


class PMismatch(InputError):
    """Two estimates being compared were taken at different p."""


class DatasetNotFound(InputError):
    """The CSV file does not exist or cannot be read."""


class MissingColumn(InputError):
    """A named column is absent from the CSV header."""


class EmptyGroup(InputError):
    """The dataset, or one of its groups, has no usable rows."""


class NonPositiveValues(InputError):
    """Strict parsing found non-positive or unparseable values."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class GroupCountNotTwo(InputError):
    """A two-sample comparison needs exactly two groups."""


class InvalidRecord(InputError):
    """A serialized accumulator record is missing fields or breaks its invariants."""


# =============================================================================
# Numeric errors (exit code 3)
# =============================================================================

class NumericError(ShareError, ArithmeticError):
    """The data are valid but the requested quantity is undefined."""

    exit_code = EXIT_NUMERIC_ERROR


class QuantileIndexZero(NumericError):
    """floor(n * p) = 0: the sample is too small for the requested p."""


class DegenerateConditional(NumericError):
    """No observation falls at or below the quantile."""


class InsufficientData(NumericError):
    """Fewer than two observations, or a zero total."""


class NonPositiveDensity(NumericError):
    """The density at the quantile is zero, negative or not finite."""


class DegenerateSampleWarning(RuntimeWarning):
    """All observations are equal; variance estimates collapse to zero."""

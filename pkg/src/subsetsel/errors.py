"""Exception types shared across the package."""

from __future__ import annotations


class SubsetSelError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(SubsetSelError):
    """Array shapes that must agree do not."""


class NonFiniteData(SubsetSelError):
    """An input array or file contains NaN or infinite entries."""


class CsvFormatError(SubsetSelError):
    """A delimited input file violates the expected layout."""


class ConfigError(SubsetSelError):
    """A study or CLI configuration is malformed."""


class ConstantColumn(SubsetSelError):
    """A design column has zero sample variance and cannot be standardized."""

    def __init__(self, column: int, name: str | None = None):
        self.column = column
        self.name = name
        label = name if name is not None else f"column {column}"
        super().__init__(f"cannot standardize constant design column: {label}")


class InvalidLabel(SubsetSelError):
    """A classification response contains a value outside {-1, +1}."""


class DomainBoundary(SubsetSelError):
    """A dual point sits at or beyond the boundary of a conjugate domain."""


class InfeasibleBudget(SubsetSelError):
    """The selection budget is outside the feasible range."""


class InvalidPenalty(SubsetSelError):
    """The ridge weight gamma must be strictly positive and finite."""


class InvalidGrouping(SubsetSelError):
    """A group assignment does not partition the feature columns."""


class NotOLS(SubsetSelError):
    """A closed-form path that requires squared-error losses got another kind."""


class IndexOutOfRange(SubsetSelError):
    """A feature or group index lies outside the valid range."""


class TooFewSamples(SubsetSelError):
    """An operation needs more sample points than were provided."""


class NonPositiveBandwidth(SubsetSelError):
    """Kernel bandwidth must be strictly positive."""


class GridMismatch(SubsetSelError):
    """Two curves that must share a common grid do not."""


class AsymmetricAdjacency(SubsetSelError):
    """Graph adjacency must be symmetric, non-negative, with a zero diagonal."""


class TooLarge(SubsetSelError):
    """Exhaustive enumeration was asked to visit too many supports."""


class ShapeMismatch(SubsetSelError):
    """Two coefficient matrices being compared have different shapes."""

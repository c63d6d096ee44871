"""Exception types raised across the package.

Everything derives from BeableOverlapError (itself a ValueError), so callers
can catch domain failures with a single except clause while plain ValueErrors
from user code stay distinguishable.
"""


class BeableOverlapError(ValueError):
    """Base class for all domain errors raised by this package."""


class InvalidDimensionError(BeableOverlapError):
    """A dimension or system count was zero or negative."""


class InvalidParameterError(BeableOverlapError):
    """A numeric parameter fell outside its allowed range."""


class IncompatibleStatesError(BeableOverlapError):
    """Two states cannot be compared (dimension, kind, or factor mismatch)."""


class IncompatibleGridsError(BeableOverlapError):
    """Two tabulated functions do not share a grid."""


class AmbiguousMaximumError(BeableOverlapError):
    """A factor has more than one global maximum within tolerance."""


class NoCrossingError(BeableOverlapError):
    """The two factors never cross between their maxima."""


class AmbiguousCrossingError(BeableOverlapError):
    """The two factors cross more than once between their maxima."""


class DegenerateWeightsError(BeableOverlapError):
    """All importance weights vanished; the ratio estimate is undefined."""


class InsufficientSignalError(BeableOverlapError):
    """Too few rows rise above the noise floor to fit a decay rate."""


class InsufficientDataError(BeableOverlapError):
    """Fewer than two usable points were supplied to a fit."""


class InvalidPointError(BeableOverlapError):
    """A fit input point had a non-positive value."""


class GridParseError(BeableOverlapError):
    """A grid file could not be parsed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class NotNormalizedError(BeableOverlapError):
    """A tabulated amplitude's squared integral is too far from 1."""

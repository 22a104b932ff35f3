"""Exception types shared across the package."""


class IsingGameError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IsingGameError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutOfTabulatedRange(IsingGameError, ValueError):
    """A tabulated log-odds function was queried beyond its grid."""


class InvalidDistribution(IsingGameError, ValueError):
    """A degree distribution is empty, negative or otherwise malformed."""


class LengthMismatch(IsingGameError, ValueError):
    """Per-degree data does not align with the distribution's support."""


class ToleranceNotReached(IsingGameError):
    """Bisection exhausted its iteration budget above the residual tolerance."""


class TooLarge(IsingGameError, ValueError):
    """Exhaustive enumeration was requested for more agents than supported."""


class UnknownDegreeLabel(IsingGameError, KeyError):
    """A degree label has no entry in the supplied expectation map."""

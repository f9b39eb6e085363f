"""Exception hierarchy shared by all modules."""


class SpectralLimitsError(Exception):
    """Base class for all library errors."""


class ValidationError(SpectralLimitsError):
    """Malformed input: bad shapes, violated axioms, inconsistent data."""


class NumericError(SpectralLimitsError):
    """A numerically well-posed computation failed (non-convergence, NaN)."""


class SingularityError(NumericError):
    """Resolvent requested at (or too close to) a spectral point."""


class UnsupportedError(SpectralLimitsError):
    """Operation not defined for this kind of input (e.g. noncommutative)."""

"""Exception types raised by the package."""


class EprBiasError(Exception):
    """Base class for all package errors."""


class InvalidArgument(EprBiasError, ValueError):
    pass


class InvalidState(EprBiasError, ValueError):
    """Covariance is not a physical (or not a positive semi-definite) matrix."""


class DegenerateMeasurement(EprBiasError, ArithmeticError):
    """Homodyne measurement on a quadrature with (numerically) zero variance."""


class DegenerateConditioner(EprBiasError, ArithmeticError):
    """Conditioning block is singular, e.g. a perfectly squeezed input."""


class CutoffTooSmall(EprBiasError, RuntimeError):
    """Fock truncation leaks more norm than allowed."""

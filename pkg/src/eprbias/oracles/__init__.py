"""Independent cross-checks for the covariance engine."""

from .fock import (
    FockVector,
    fock_beamsplitter,
    fock_quadrature_covariance,
    fock_squeezed_vacuum,
    fock_vacuum,
)
from .montecarlo import (
    SampleMatrix,
    estimate_conditional_variance,
    estimate_mode_conditional_variance,
    relative_tolerance,
    sample_quadratures,
)

__all__ = [
    "FockVector",
    "SampleMatrix",
    "estimate_conditional_variance",
    "estimate_mode_conditional_variance",
    "fock_beamsplitter",
    "fock_quadrature_covariance",
    "fock_squeezed_vacuum",
    "fock_vacuum",
    "relative_tolerance",
    "sample_quadratures",
]

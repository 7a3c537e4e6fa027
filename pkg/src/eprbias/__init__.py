"""Biased and unbiased continuous-variable entanglement with Gaussian states."""

from .errors import (
    CutoffTooSmall,
    DegenerateConditioner,
    DegenerateMeasurement,
    EprBiasError,
    InvalidArgument,
    InvalidState,
)
from .gaussian import (
    GaussianState,
    SymplecticOp,
    apply_beamsplitter,
    apply_phase_flip,
    apply_squeezer,
    correlation,
    direct_sum,
    displace,
    homodyne_condition,
    quadrature_variance,
    sideband_photon_number,
    squeezed_vacuum,
    vacuum_state,
)
from .metrics import (
    EprReport,
    GhzReport,
    conditional_variance,
    epr_product,
    ghz_product,
    maximality_lambda,
    minimal_photon_number,
)
from .protocols import (
    EprRecipe,
    GhzRecipe,
    ghz_balancing_gain,
    ghz_maximal_input_variance,
    ghz_symmetrizing_gain,
    make_epr_pair,
    make_ghz_triple,
    symmetrize_epr,
    symmetrize_ghz,
    symmetrizing_gain,
)
from .teleport import (
    TeleportReport,
    coherent_fidelity,
    fidelity_from_output,
    max_coherent_fidelity,
    simulate_teleporter,
    squeezed_signal_fidelity,
)

__version__ = "0.1.0"

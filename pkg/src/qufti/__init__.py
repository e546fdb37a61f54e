"""Multiphase estimation with single photons in Fourier interferometers."""

from .detection import NRD, SPD, DetectionScheme, classify_outcome, coarse_grain, one_nrd
from .errors import (
    ArityError,
    ConfigurationError,
    DimensionError,
    NoOptimumError,
    NumericalError,
    QuftiError,
    ReferenceModeError,
    ShapeError,
    SizeGuardError,
)
from .fisher import (
    FisherMatrix,
    VarianceBound,
    classical_fisher,
    coherent_variance,
    fair_comparison,
    probability_jacobian,
    qcrb_closed_form,
    qfi_inverse_closed_form,
    quantum_fisher_analytic,
    quantum_fisher_numeric,
    total_variance,
)
from .fock import (
    FockState,
    OutcomeDistribution,
    amplitude,
    enumerate_configs,
    frame_state,
    number_covariance,
    output_distribution,
)
from .linalg import (
    Interferometer,
    build_phase_layer,
    build_qft,
    compose_interferometer,
    expand_submatrix,
    is_unitary,
)
from .optimize import Optimum, OptimizerOptions, minimize_variance, multistart_minimize
from .permanent import permanent_naive, permanent_ryser
from .scattershot import (
    ScattershotSpec,
    crossing_efficiency,
    herald_configs,
    scattershot_sweep,
    scattershot_variance,
)

__version__ = "0.1.0"

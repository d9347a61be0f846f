"""Frequency estimation of a quantum harmonic oscillator by frequency jumps."""

__version__ = "0.1.0"

from .dynamics import (
    GaussianState,
    ProtocolConfig,
    Symplectic2,
    cycle_propagator,
    evolve_vacuum,
    jump_propagator,
    rotation_propagator,
    schedule_propagator,
)
from .errors import (
    ComparisonUndefinedError,
    DomainError,
    FreqJumpError,
    NonPureStateError,
    TruncationError,
)
from .estimation import (
    ComparisonReport,
    QfiResult,
    free_evolution_qfi,
    gamma_ratio,
    qfi_formula_sanity,
    qfi_gaussian,
)
from .fock import FockVector, evolve_fock, qfi_pure, squeezed_vacuum_coeffs
from .optimize import OptimizationResult, optimize_alpha, rho_n, scaling_fit, scan_alpha
from .squeezing import (
    ResourceAccount,
    SqueezeParams,
    alpha_max,
    extract_squeeze,
    nbar_from_squeeze,
    r_max,
    squeeze_params,
)

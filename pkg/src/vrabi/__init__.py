"""Beyond-RWA dynamics of a V-type three-level atom in a quantized field.

Simulates the interaction-picture amplitude equations of a three-level
V-configuration atom coupled to one field mode with counter-rotating
terms kept, and quantifies how well the two-level reduction (dropping
the second excited level) reproduces the population dynamics.
"""

from .model import (
    LEVELS,
    ChainParity,
    ChainState,
    ModelParams,
    SystemState,
    coherent_weights,
    initial_state,
    merged_amplitudes,
    population,
)
from .dynamics import (
    ConvergenceReport,
    IntegrationError,
    IntegratorConfig,
    NormDrift,
    TimeSeries,
    TruncationOverflow,
    advance_chain,
    chain_rhs,
    convergence_check,
    evolve,
)
from .oracle import (
    DenseHamiltonian,
    DensePropagator,
    build_hamiltonian,
    propagate_dense,
    rwa_pb,
)
from .analysis import (
    DEFAULT_PLACEMENTS,
    DEFAULT_RATIOS,
    CellFailure,
    ComparisonResult,
    ErrorSurface,
    compare,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "LEVELS",
    "ModelParams",
    "ChainParity",
    "ChainState",
    "SystemState",
    "coherent_weights",
    "initial_state",
    "population",
    "merged_amplitudes",
    "IntegratorConfig",
    "TimeSeries",
    "IntegrationError",
    "NormDrift",
    "TruncationOverflow",
    "ConvergenceReport",
    "chain_rhs",
    "advance_chain",
    "evolve",
    "convergence_check",
    "DenseHamiltonian",
    "DensePropagator",
    "build_hamiltonian",
    "propagate_dense",
    "rwa_pb",
    "ComparisonResult",
    "ErrorSurface",
    "CellFailure",
    "compare",
    "sweep",
    "DEFAULT_RATIOS",
    "DEFAULT_PLACEMENTS",
    "__version__",
]

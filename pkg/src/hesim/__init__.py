"""Simulation toolkit for qubit-boson hybrid entangled states.

Builds even/odd cat codewords on truncated Fock spaces, the pseudospin
parity algebra, CHSH Bell analysis with both a closed-form and a numerical
optimum, entanglement measures, and seeded teleportation / entanglement
swapping protocols, plus a batch CLI (``hesim``).
"""

from .bellchsh import (
    CIRELSON_BOUND,
    CLASSICAL_BOUND,
    ChshResult,
    ChshSettings,
    analytic_optimum,
    analytic_settings,
    bell_operator,
    chsh_value,
    correlation_matrix,
    optimize_chsh,
)
from .entanglement import (
    Bipartition,
    SchmidtSpectrum,
    entanglement_entropy,
    schmidt_coefficients,
)
from .fock import (
    DEFAULT_RESIDUAL_TOL,
    DensityMatrix,
    FactorKind,
    Operator,
    SpaceDescriptor,
    StateVector,
    TruncationError,
    apply,
    even_coherent,
    fock_state,
    identity_op,
    inner,
    mode_dim_for,
    odd_coherent,
    partial_inner,
    partial_trace,
    qubit_state,
    tensor,
    tensor_op,
)
from .protocols import (
    Correction,
    HesLabel,
    ParityBellLabel,
    RngStream,
    SpinBellLabel,
    SwapRecord,
    TeleportRecord,
    correction_for,
    decompose_teleport_input,
    hes_state,
    measure_parity_bell,
    measure_spin_bell,
    parity_bell_probabilities,
    parity_bell_state,
    parity_correction_for,
    parity_measurement,
    spin_bell_probabilities,
    spin_bell_state,
    swap_entanglement,
    swap_expansion_coefficients,
    teleport_parity,
    teleport_spin,
)
from .pseudospin import (
    Direction,
    PseudospinOps,
    build_pseudospin,
    dot_s,
    dot_sigma,
    k_matrix,
    k_series,
)

__version__ = "0.1.0"

__all__ = [
    "CIRELSON_BOUND",
    "CLASSICAL_BOUND",
    "DEFAULT_RESIDUAL_TOL",
    "Bipartition",
    "ChshResult",
    "ChshSettings",
    "Correction",
    "DensityMatrix",
    "Direction",
    "FactorKind",
    "HesLabel",
    "Operator",
    "ParityBellLabel",
    "PseudospinOps",
    "RngStream",
    "SchmidtSpectrum",
    "SpaceDescriptor",
    "SpinBellLabel",
    "StateVector",
    "SwapRecord",
    "TeleportRecord",
    "TruncationError",
    "analytic_optimum",
    "analytic_settings",
    "apply",
    "bell_operator",
    "build_pseudospin",
    "chsh_value",
    "correction_for",
    "correlation_matrix",
    "decompose_teleport_input",
    "dot_s",
    "dot_sigma",
    "entanglement_entropy",
    "even_coherent",
    "fock_state",
    "hes_state",
    "identity_op",
    "inner",
    "k_matrix",
    "k_series",
    "measure_parity_bell",
    "measure_spin_bell",
    "mode_dim_for",
    "odd_coherent",
    "optimize_chsh",
    "parity_bell_probabilities",
    "parity_bell_state",
    "parity_correction_for",
    "parity_measurement",
    "partial_inner",
    "partial_trace",
    "qubit_state",
    "schmidt_coefficients",
    "spin_bell_probabilities",
    "spin_bell_state",
    "swap_entanglement",
    "swap_expansion_coefficients",
    "tensor",
    "tensor_op",
    "teleport_parity",
    "teleport_spin",
]

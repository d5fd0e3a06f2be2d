"""Exact state-vector simulation of short chains, for validation."""

from .chain import (
    ChainHamiltonian,
    SpinState,
    apply_parity,
    build_hamiltonian,
    evolve_chain,
    ground_state,
    odd_parity_weight,
)
from .kinks import KinkSpectrumTable, kink_pair_distribution
from .validation import (
    CrossValidationReport,
    cross_validate,
    oracle_mode_probabilities,
    pair_bloch_vector,
)

__all__ = [
    "ChainHamiltonian",
    "CrossValidationReport",
    "KinkSpectrumTable",
    "SpinState",
    "apply_parity",
    "build_hamiltonian",
    "cross_validate",
    "evolve_chain",
    "ground_state",
    "kink_pair_distribution",
    "odd_parity_weight",
    "oracle_mode_probabilities",
    "pair_bloch_vector",
]

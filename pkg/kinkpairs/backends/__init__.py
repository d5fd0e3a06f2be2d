"""Excitation backends: per-mode probabilities by closed form or integration."""

from .backend import Backend, BackendMeta, ExcitationInterface, Method, ModeResult
from .closed_form import ClosedFormBackend
from .dephased import (
    DensityMatrix2,
    DephasedBackend,
    DephasingBasis,
    DephasingConfig,
    evolve_mode_dephased,
)
from .environment import BackendSettings, MethodEnvironment, default_environment
from .spectrum import map_modes, ordered_map
from .unitary import (
    IntegratorConfig,
    IntegratorMethod,
    PureState2,
    UnitaryBackend,
    evolve_mode,
    excitation_spectrum,
    prepare_ground,
)

__all__ = [
    "Backend",
    "BackendMeta",
    "BackendSettings",
    "ClosedFormBackend",
    "DensityMatrix2",
    "DephasedBackend",
    "DephasingBasis",
    "DephasingConfig",
    "ExcitationInterface",
    "IntegratorConfig",
    "IntegratorMethod",
    "Method",
    "MethodEnvironment",
    "ModeResult",
    "PureState2",
    "UnitaryBackend",
    "default_environment",
    "evolve_mode",
    "evolve_mode_dephased",
    "excitation_spectrum",
    "map_modes",
    "ordered_map",
    "prepare_ground",
]

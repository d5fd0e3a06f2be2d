"""Kink-pair counting statistics of the quenched transverse-field Ising chain."""

from .backends.environment import MethodEnvironment, default_environment
from .modes import ChainSpec, QuenchSchedule, ScheduleKind

__all__ = [
    "ChainSpec",
    "MethodEnvironment",
    "QuenchSchedule",
    "ScheduleKind",
    "default_environment",
    "__version__",
    "__version_short__",
]

__version__ = "1.0.0"
__version_short__ = "1.0.0"

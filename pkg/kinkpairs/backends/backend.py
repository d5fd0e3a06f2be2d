"""The base classes for excitation backends."""

import inspect
import logging
import math
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import partial, wraps
from typing import TYPE_CHECKING, Type

from kinkpairs.exceptions import NumericalError
from kinkpairs.modes import ChainSpec, QuenchSchedule, grid_momenta
from kinkpairs.types import ImmutableList

from .spectrum import map_modes

if TYPE_CHECKING:  # pragma: nocover
    from .environment import BackendSettings  # noqa


class Method(Enum):
    """How the excitation probability of a mode is obtained."""

    CLOSED_FORM = "ClosedForm"
    UNITARY = "Unitary"
    DEPHASED = "Dephased"


@dataclass(frozen=True)
class ModeResult:
    """The excitation probability of one momentum pair, with provenance."""

    k: float
    p_k: float
    method: Method
    norm_drift: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p_k) and 0.0 <= self.p_k <= 1.0):
            raise NumericalError(
                f"Excitation probability {self.p_k!r} outside [0, 1]",
                k=self.k,
            )


class ExcitationInterface(metaclass=ABCMeta):
    """An interface for computing the excitation probability of a mode."""

    @abstractmethod
    def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
        """
        Excitation probability of mode k after the quench.

        :param k: momentum in (0, pi).
        :param schedule: the quench.
        """
        raise NotImplementedError  # pragma: no cover


def _wrap_method_with_logging(
    backend_class: Type['Backend'],
    method_name: str,
    logger: logging.Logger,
) -> None:
    old_method = getattr(backend_class, method_name)
    signature = inspect.signature(old_method)

    @wraps(old_method)
    def new_method(*args, **kwargs):  # type: ignore
        retval = old_method(*args, **kwargs)
        arg_map = signature.bind(*args, **kwargs).arguments
        args_str = ", ".join(
            f"{name}={value!r}"
            for name, value in arg_map.items()
            if name != "self"
        )
        retval_str = (f" -> {retval!r}" if retval is not None else "")
        message = f"{backend_class.__name__}.{method_name}({args_str}){retval_str}"
        logger.debug(message)
        return retval
    setattr(backend_class, method_name, new_method)


def _wrap_methods_with_logging(backend_class: Type['Backend']) -> None:
    logger = logging.getLogger(ExcitationInterface.__module__)
    for method_name in ExcitationInterface.__abstractmethods__:
        _wrap_method_with_logging(backend_class, method_name, logger)


class BackendMeta(ABCMeta):
    """
    The metaclass for an excitation backend.

    Ensures that a concrete backend implements the excitation interface when
    the class is created, and wraps the interface methods so that every call is
    logged at debug level.
    """

    def __new__(mcs, name, bases, namespace, **kwargs):  # type:ignore
        """
        Create a new class object.

        :returns: a new backend class.

        # noqa: DAR101
        """
        cls = super().__new__(mcs, name, bases, namespace, **kwargs)

        if cls.__name__ == "Backend":
            return cls

        # Check if this is an abstract Backend.
        if getattr(cls, "__abstractmethods__", None):
            return cls

        mcs._check_interface(cls)  # type: ignore
        _wrap_methods_with_logging(cls)  # type: ignore

        return cls

    def _check_interface(cls):  # type: ignore
        """
        Check that the backend has the right interface.

        :raises TypeError: The backend class doesn't implement ExcitationInterface.
        """
        if not issubclass(cls, ExcitationInterface):
            raise TypeError("The backend class doesn't have a required interface.")


class Backend(metaclass=BackendMeta):
    """
    The base class for an excitation backend.

    A backend turns a momentum and a quench schedule into an excitation
    probability, by one method. It holds the numerical settings it was built
    with and nothing else, so instances can be sent to worker processes.
    """

    def __init__(self, settings: 'BackendSettings') -> None:
        self._settings = settings

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._settings!r})"

    @classmethod
    def from_settings(cls, settings: 'BackendSettings') -> 'Backend':
        """
        Build the backend from numerical settings.

        :param settings: integrator, dephasing and parallelism settings.
        :returns: the backend.
        """
        return cls(settings)

    @property
    def settings(self) -> 'BackendSettings':
        """
        The settings this backend was built with.

        :returns: the settings.
        """
        return self._settings

    @property
    @abstractmethod
    def method(self) -> Method:
        """The method this backend implements."""
        raise NotImplementedError  # pragma: no cover

    def excitation_spectrum(
        self,
        spec: ChainSpec,
        schedule: QuenchSchedule,
    ) -> ImmutableList[ModeResult]:
        """
        Excitation probabilities over the whole positive momentum grid.

        :param spec: the chain.
        :param schedule: the quench.
        :returns: one result per grid momentum, ordered by k.
        """
        per_mode = partial(
            self.mode_probability,  # type: ignore[attr-defined]
            schedule=schedule,
        )
        return map_modes(
            per_mode,
            grid_momenta(spec),
            workers=self._settings.workers,
            quench_time=schedule.quench_time,
        )

"""Environment class and related functions."""

from dataclasses import dataclass, field
from typing import Dict, Set, Type

from kinkpairs.counting.closed_form import LZForm
from kinkpairs.exceptions import ConfigurationError

from .backend import Backend, Method
from .closed_form import ClosedFormBackend
from .dephased import DephasedBackend, DephasingConfig
from .unitary import IntegratorConfig, UnitaryBackend


@dataclass(frozen=True)
class BackendSettings:
    """Numerical settings shared by every backend of a run."""

    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    dephasing: DephasingConfig = field(default_factory=DephasingConfig)
    lz_form: LZForm = LZForm.SOFT_MODE
    workers: int = 1

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")


class MethodEnvironment:
    """
    A collection of backends that can be used together.

    Each excitation method is provided by exactly one backend class. Sweeps
    and the command line look backends up here by method, so an alternative
    implementation of a method can be swapped in by registering it in a
    different environment.
    """

    def __init__(self, name: str):
        self.name = name
        self.method_backend_mapping: Dict[Method, Type[Backend]] = {}

    @property
    def supported_methods(self) -> Set[Method]:
        """
        The methods that are supported by this environment.

        :returns: set of methods that are supported by this environment.
        """
        return set(self.method_backend_mapping.keys())

    def __str__(self) -> str:
        """
        Get a string representation of this environment.

        :returns: name of the environment.
        """
        return self.name

    def register_backend(self, backend: Type[Backend]) -> None:
        """
        Register a new backend with this environment.

        :param backend: The backend to register in the environment.
        :raises RuntimeError: The backend has already been registered.
        """
        method: Method = backend.method  # type: ignore[assignment]
        if method in self.method_backend_mapping.keys():
            raise RuntimeError(f"Attempted to register multiple backends for"
                               f" {method.value} in the same environment.")
        self.method_backend_mapping[method] = backend

    def get_backend(self, method: Method) -> Type[Backend]:
        """
        Get the backend for a method.

        :param method: method to fetch a backend for.
        :returns: Backend in this environment for the given method.
        :raises NotImplementedError: The environment does not support the method.
        """
        if method not in self.supported_methods:
            raise NotImplementedError(f"{str(self)} does not support {method.value}")

        return self.method_backend_mapping[method]

    def create_backend(self, method: Method, settings: BackendSettings) -> Backend:
        """
        Build the backend for a method.

        :param method: method to build a backend for.
        :param settings: numerical settings for the backend.
        :returns: the backend instance.
        """
        return self.get_backend(method).from_settings(settings)

    def merge(self, other: 'MethodEnvironment') -> None:
        """
        Merge in the method-backend mappings from another environment.

        This method will fail if any method is defined in both environments,
        as it is unclear which one has the correct mapping.

        :param other: environment to merge into this one.
        :raises RuntimeError: a method was implemented in both environments.
        """
        intersection = self.supported_methods & other.supported_methods

        if len(intersection) > 0:
            common_methods = ", ".join(sorted(x.value for x in intersection))
            raise RuntimeError(
                f"Attempted to merge two Environments"
                f" that both contain: {common_methods}")
        self.method_backend_mapping = {
            **self.method_backend_mapping,
            **other.method_backend_mapping,
        }


def default_environment() -> MethodEnvironment:
    """
    The environment with every built-in backend registered.

    :returns: a new environment.
    """
    environment = MethodEnvironment("DefaultEnvironment")
    for backend in (ClosedFormBackend, UnitaryBackend, DephasedBackend):
        environment.register_backend(backend)
    return environment

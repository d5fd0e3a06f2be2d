"""Test method environments and backend settings."""

import pytest

from kinkpairs.backends import (
    Backend,
    BackendSettings,
    ClosedFormBackend,
    DephasedBackend,
    ExcitationInterface,
    Method,
    MethodEnvironment,
    ModeResult,
    UnitaryBackend,
    default_environment,
)
from kinkpairs.exceptions import ConfigurationError
from kinkpairs.modes import QuenchSchedule

from .utils import MockBackend, MockUnitaryBackend


def test_environment_supported_methods() -> None:
    """Test that we can get the supported methods of an environment."""
    environment = MethodEnvironment("MockEnv")
    environment.register_backend(MockBackend)
    assert type(environment.supported_methods) is set
    assert environment.supported_methods == {Method.CLOSED_FORM}


def test_environment_method_backend_mapping() -> None:
    """Test that the method_backend_mapping works."""
    environment = MethodEnvironment("MockEnv")
    environment.register_backend(MockBackend)
    assert type(environment.method_backend_mapping) == dict
    assert environment.method_backend_mapping[Method.CLOSED_FORM] == MockBackend


def test_environment_get_backend() -> None:
    """Test that we can get the backend of a method."""
    environment = MethodEnvironment("MockEnv")
    environment.register_backend(MockBackend)
    assert issubclass(environment.get_backend(Method.CLOSED_FORM), MockBackend)


def test_environment_get_backend_unknown() -> None:
    """Test that we can't get the backend of an unregistered method."""
    environment = MethodEnvironment("MockEnv")
    environment.register_backend(MockBackend)
    with pytest.raises(NotImplementedError):
        assert environment.get_backend(Method.DEPHASED)


def test_environment_create_backend() -> None:
    """Test that an environment builds backends from settings."""
    environment = MethodEnvironment("MockEnv")
    environment.register_backend(MockBackend)
    settings = BackendSettings(workers=3)
    backend = environment.create_backend(Method.CLOSED_FORM, settings)
    assert isinstance(backend, MockBackend)
    assert backend.settings is settings


def test_environment_str() -> None:
    """Test that an environment is shown by its name."""
    assert str(MethodEnvironment("MockEnv")) == "MockEnv"


def test_environment_merge() -> None:
    """Test that we can merge environments."""
    env1 = MethodEnvironment("Env1")
    env2 = MethodEnvironment("Env2")

    env1.merge(env2)
    assert len(env1.supported_methods) == 0

    env2.register_backend(MockBackend)
    env1.register_backend(MockUnitaryBackend)
    env1.merge(env2)
    assert env1.supported_methods == {Method.CLOSED_FORM, Method.UNITARY}
    assert env2.supported_methods == {Method.CLOSED_FORM}


def test_environment_merge_duplicate() -> None:
    """Test that the correct exception is thrown if duplicate entries exist."""
    env1 = MethodEnvironment("Env1")
    env2 = MethodEnvironment("Env2")

    env1.register_backend(MockBackend)
    env2.register_backend(MockBackend)

    with pytest.raises(RuntimeError) as e:
        env1.merge(env2)
    assert str(e.value) == \
        "Attempted to merge two Environments that both contain: ClosedForm"


def test_environment_check_multiple_backends_same_env() -> None:
    """Test that we can't define two backends for the same method."""
    test_environment = MethodEnvironment("test_environment")

    class BackendOne(ExcitationInterface, Backend):
        method = Method.UNITARY

        def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
            return ModeResult(k=k, p_k=0.0, method=Method.UNITARY)

    test_environment.register_backend(BackendOne)

    with pytest.raises(RuntimeError):
        test_environment.register_backend(MockUnitaryBackend)


def test_default_environment() -> None:
    """Test that the default environment provides every method."""
    environment = default_environment()
    assert environment.get_backend(Method.CLOSED_FORM) is ClosedFormBackend
    assert environment.get_backend(Method.UNITARY) is UnitaryBackend
    assert environment.get_backend(Method.DEPHASED) is DephasedBackend


def test_default_environment_is_fresh() -> None:
    """Test that changing one default environment leaves the next alone."""
    first = default_environment()
    first.method_backend_mapping.clear()
    assert len(default_environment().supported_methods) == 3


def test_backend_settings_rejects_no_workers() -> None:
    """Test that at least one worker is required."""
    with pytest.raises(ConfigurationError):
        BackendSettings(workers=0)

"""Tests for the dephased mode dynamics."""

import math

import numpy as np
import pytest
from scipy import linalg

from kinkpairs.backends import (
    BackendSettings,
    DensityMatrix2,
    DephasedBackend,
    DephasingBasis,
    DephasingConfig,
    IntegratorConfig,
    IntegratorMethod,
    Method,
    PureState2,
    evolve_mode,
    evolve_mode_dephased,
)
from kinkpairs.backends.dephased import (
    bloch_generator,
    ground_bloch_vector,
    propagate_bloch,
)
from kinkpairs.exceptions import ConfigurationError, NumericalError
from kinkpairs.modes import ChainSpec, QuenchSchedule, grid_momenta, mode_trajectory

MAGNUS = IntegratorConfig(method=IntegratorMethod.MAGNUS4, max_step=0.05)


def test_dephasing_config_validation() -> None:
    """Test that the dephasing rate must be nonnegative and finite."""
    assert DephasingConfig().gamma == 0.0
    with pytest.raises(ConfigurationError):
        DephasingConfig(gamma=-0.1)
    with pytest.raises(ConfigurationError):
        DephasingConfig(gamma=float("inf"))


def test_density_matrix_validation() -> None:
    """Test that only valid density matrices are accepted."""
    with pytest.raises(ConfigurationError):
        DensityMatrix2(np.eye(3) / 3)
    with pytest.raises(NumericalError):
        DensityMatrix2(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(NumericalError):
        DensityMatrix2(np.eye(2))
    with pytest.raises(NumericalError):
        DensityMatrix2(np.array([[1.5, 0.0], [0.0, -0.5]]))


def test_density_matrix_bloch_vector() -> None:
    """Test the Bloch vector and purity of a density matrix."""
    r = np.array([0.3, -0.4, 0.5])
    rho = DensityMatrix2.from_bloch(r)
    assert np.allclose(rho.bloch_vector, r)
    assert rho.purity == pytest.approx(0.5 * (1 + r @ r))
    assert rho.population(PureState2(np.array([1.0, 0.0]))) == pytest.approx(0.75)


def test_bloch_generator_precession() -> None:
    """Test that the generator is the cross product with the field."""
    generator = bloch_generator(np.asarray(1.0), np.asarray(2.0), DephasingConfig())
    r = np.array([0.1, 0.2, 0.3])
    assert np.allclose(generator @ r, np.cross([1.0, 0.0, 2.0], r))


def test_bloch_generator_damps_transverse_components() -> None:
    """Test that qubit-axis dephasing damps x and y at rate 2 gamma."""
    noise = DephasingConfig(gamma=0.5)
    generator = bloch_generator(np.asarray(0.0), np.asarray(0.0), noise)
    assert np.allclose(generator, np.diag([-1.0, -1.0, 0.0]))


def test_ground_bloch_vector() -> None:
    """Test that the ground Bloch vector points against the field."""
    k, g = 1.0, -2.0
    r = ground_bloch_vector(k, g)
    field = np.array([4 * math.sin(k), 0.0, 4 * (g - math.cos(k))])
    assert np.allclose(r, -field / np.linalg.norm(field))


@pytest.mark.parametrize(
    "quench_time", [0.5, 5.0, pytest.param(50.0, marks=pytest.mark.slow)],
)
def test_no_dephasing_matches_unitary(quench_time: float) -> None:
    """Test that a zero dephasing rate reproduces the closed-system grid."""
    schedule = QuenchSchedule(quench_time)
    cfg = IntegratorConfig()
    for k in grid_momenta(ChainSpec(20)):
        dephased = evolve_mode_dephased(k, schedule, cfg, DephasingConfig())
        unitary = evolve_mode(k, schedule, cfg)
        assert dephased.method is Method.DEPHASED
        assert dephased.p_k == pytest.approx(unitary.p_k, abs=1e-8)
        assert dephased.norm_drift < 1e-8


def test_no_dephasing_magnus_matches_unitary() -> None:
    """Test the zero-rate reduction with the fixed-step integrator."""
    k = 3 * math.pi / 4
    schedule = QuenchSchedule(1.5)
    dephased = evolve_mode_dephased(k, schedule, MAGNUS, DephasingConfig())
    unitary = evolve_mode(k, schedule, IntegratorConfig())
    assert dephased.p_k == pytest.approx(unitary.p_k, abs=1e-5)


def test_dephasing_heats_slow_quench() -> None:
    """Test that qubit-axis dephasing excites a mode a slow ramp leaves cold."""
    k = math.pi / 2
    schedule = QuenchSchedule(20.0)
    unitary = evolve_mode(k, schedule, MAGNUS)
    noisy = evolve_mode_dephased(k, schedule, MAGNUS, DephasingConfig(gamma=0.1))
    assert unitary.p_k < 1e-3
    assert 0.01 < noisy.p_k < 0.5 + 1e-6


def test_energy_basis_dephasing_suppresses_transitions() -> None:
    """Test that strong energy-axis dephasing pins a mode to its ground state."""
    k = math.pi / 2
    schedule = QuenchSchedule(0.5)
    noise = DephasingConfig(gamma=500.0, basis=DephasingBasis.INSTANTANEOUS_ENERGY)
    unitary = evolve_mode(k, schedule, IntegratorConfig())
    radau = IntegratorConfig(method=IntegratorMethod.RADAU)
    noisy = evolve_mode_dephased(k, schedule, radau, noise)
    assert noisy.p_k < 0.5 * unitary.p_k


def test_dephased_sudden_limit() -> None:
    """Test that a vanishing ramp is an instantaneous jump with or without noise."""
    result = evolve_mode_dephased(
        math.pi / 2,
        QuenchSchedule(1e-10),
        IntegratorConfig(),
        DephasingConfig(gamma=1.0),
    )
    assert result.p_k == pytest.approx(0.401942, abs=1e-6)


def test_dephased_backend_uses_settings() -> None:
    """Test that the backend takes its noise model from the settings."""
    settings = BackendSettings(integrator=MAGNUS, dephasing=DephasingConfig(gamma=0.1))
    schedule = QuenchSchedule(20.0)
    result = DephasedBackend(settings).mode_probability(math.pi / 2, schedule)
    expected = evolve_mode_dephased(
        math.pi / 2, schedule, MAGNUS, DephasingConfig(gamma=0.1),
    )
    assert result.p_k == pytest.approx(expected.p_k)


@pytest.mark.slow
@pytest.mark.parametrize("k", [3 * math.pi / 8, math.pi / 2])
def test_strong_dephasing_mixes_mode(k: float) -> None:
    """Test that a very large dephasing rate over a long ramp leaves p_k at one half."""
    noise = DephasingConfig(gamma=1e3)
    radau = IntegratorConfig(method=IntegratorMethod.RADAU, max_step=1.0)
    result = evolve_mode_dephased(k, QuenchSchedule(200.0), radau, noise)
    assert result.p_k == pytest.approx(0.5, abs=0.02)


@pytest.mark.parametrize("basis", list(DephasingBasis))
def test_purity_decreases_under_frozen_field(basis: DephasingBasis) -> None:
    """Test that pure dephasing never raises the purity while the field is fixed."""
    noise = DephasingConfig(gamma=0.3, basis=basis)
    generator = bloch_generator(np.asarray(2.0), np.asarray(-1.5), noise)
    r0 = np.array([0.6, 0.0, 0.8])
    purities = np.array([
        DensityMatrix2.from_bloch(linalg.expm(generator * t) @ r0).purity
        for t in np.linspace(0.0, 5.0, 51)
    ])
    assert purities[0] == pytest.approx(1.0)
    assert np.all(np.diff(purities) <= 1e-12)
    assert purities[-1] < 0.9


def test_driven_bloch_vector_stays_in_ball() -> None:
    """Test that the Bloch vector never leaves the unit ball under driving."""
    k = 2.0
    schedule = QuenchSchedule(3.0)
    initial = ground_bloch_vector(k, schedule.g_start)
    for method in (IntegratorMethod.DOP853, IntegratorMethod.MAGNUS4):
        cfg = IntegratorConfig(method=method, max_step=0.05)
        r = propagate_bloch(
            mode_trajectory(k, schedule), initial, cfg, DephasingConfig(gamma=0.05), 3.0,
        )
        assert float(np.linalg.norm(r)) <= 1.0 + 1e-10


def test_more_dephasing_mixes_more() -> None:
    """Test that a larger dephasing rate brings every mode closer to one half."""
    schedule = QuenchSchedule(20.0)
    for k in grid_momenta(ChainSpec(20)):
        distances = [
            abs(evolve_mode_dephased(k, schedule, MAGNUS, noise).p_k - 0.5)
            for noise in (DephasingConfig(gamma) for gamma in (0.0, 0.002, 0.02))
        ]
        assert distances[0] > distances[1] > distances[2]

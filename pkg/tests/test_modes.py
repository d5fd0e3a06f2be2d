"""Tests for the momentum grid, mode Hamiltonians and quench schedules."""

import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kinkpairs.exceptions import ConfigurationError, ScheduleWarning
from kinkpairs.modes import (
    ChainSpec,
    QuenchSchedule,
    ScheduleKind,
    TwoLevelHamiltonian,
    bloch_field,
    dispersion,
    eigenstate_angles,
    field_at,
    grid_momenta,
    ground_state_energy,
    mode_hamiltonian,
    mode_trajectory,
    momentum_grid,
    sudden_probability,
)

momenta = st.floats(min_value=1e-3, max_value=math.pi - 1e-3)
fields = st.floats(min_value=-10.0, max_value=10.0)


def test_chain_spec_defaults() -> None:
    """Test that a chain has unit coupling unless told otherwise."""
    spec = ChainSpec(8)
    assert spec.coupling == 1.0
    assert spec.n_modes == 4


@pytest.mark.parametrize("n_spins", [0, 2, 3, 7, -4])
def test_chain_spec_rejects_bad_sizes(n_spins: int) -> None:
    """Test that odd and small chains are rejected."""
    with pytest.raises(ConfigurationError):
        ChainSpec(n_spins)


def test_chain_spec_rejects_non_integer() -> None:
    """Test that the spin count must be an integer."""
    with pytest.raises(ConfigurationError):
        ChainSpec(8.0)  # type: ignore[arg-type]
    with pytest.raises(ConfigurationError):
        ChainSpec(True)


@pytest.mark.parametrize("coupling", [0.0, -1.0, float("inf"), float("nan")])
def test_chain_spec_rejects_bad_coupling(coupling: float) -> None:
    """Test that the coupling must be positive and finite."""
    with pytest.raises(ConfigurationError):
        ChainSpec(8, coupling)


def test_momentum_grid_n8() -> None:
    """Test the grid of an eight spin chain."""
    grid = momentum_grid(ChainSpec(8))
    assert [mode.index for mode in grid] == [1, 2, 3, 4]
    assert [mode.k for mode in grid] == pytest.approx(
        [math.pi / 8, 3 * math.pi / 8, 5 * math.pi / 8, 7 * math.pi / 8],
    )


def test_momentum_grid_n4() -> None:
    """Test the grid of a four spin chain."""
    assert [mode.k for mode in momentum_grid(ChainSpec(4))] == pytest.approx(
        [math.pi / 4, 3 * math.pi / 4],
    )


def test_momentum_grid_n100() -> None:
    """Test the size and first momentum of a long chain."""
    grid = momentum_grid(ChainSpec(100))
    assert len(grid) == 50
    assert grid[0].k == pytest.approx(math.pi / 100)


@given(st.integers(min_value=2, max_value=200))
def test_momentum_grid_properties(half: int) -> None:
    """Test that the grid is ascending and strictly inside (0, pi)."""
    spec = ChainSpec(2 * half)
    ks = [mode.k for mode in momentum_grid(spec)]
    assert len(ks) == half
    assert all(a < b for a, b in zip(ks, ks[1:]))
    assert 0 < ks[0] and ks[-1] < math.pi
    assert all(math.sin(k) > 0 for k in ks)
    assert np.allclose(grid_momenta(spec), ks, rtol=0, atol=1e-15)


def test_dispersion_values() -> None:
    """Test the dispersion at its closing point and two simple fields."""
    spec = ChainSpec(8)
    assert dispersion(math.pi, -1.0, spec) == pytest.approx(0.0, abs=1e-15)
    assert dispersion(0.7, 0.0, spec) == pytest.approx(2.0)
    assert dispersion(math.pi / 2, -5.0, spec) == pytest.approx(2 * math.sqrt(26))
    assert dispersion(0.7, 0.0, ChainSpec(8, 2.5)) == pytest.approx(5.0)


def test_bloch_field_components() -> None:
    """Test that the field components are returned as (hx, hz)."""
    hx, hz = bloch_field(math.pi / 2, -5.0)
    assert hx == pytest.approx(4.0)
    assert hz == pytest.approx(-20.0)


def test_mode_hamiltonian_at_crossing() -> None:
    """Test that the avoided-crossing centre is a pure sigma_x Hamiltonian."""
    hamiltonian = mode_hamiltonian(math.pi / 2, 0.0, ChainSpec(8))
    assert hamiltonian.hz == pytest.approx(0.0, abs=1e-15)
    assert hamiltonian.hx == pytest.approx(4.0)
    assert hamiltonian.gap == pytest.approx(4.0)


def test_mode_hamiltonian_ratio() -> None:
    """Test the ratio of the field components at the starting field."""
    k = math.pi / 8
    hamiltonian = mode_hamiltonian(k, -5.0, ChainSpec(8))
    assert hamiltonian.hz / hamiltonian.hx == pytest.approx(
        (-5 - math.cos(k)) / math.sin(k),
    )


def test_mode_hamiltonian_matches_dispersion() -> None:
    """Test one spectrum against the dispersion directly."""
    spec = ChainSpec(8)
    k, g = 3 * math.pi / 8, -2.0
    eigenvalues = np.linalg.eigvalsh(mode_hamiltonian(k, g, spec).matrix())
    energy = dispersion(k, g, spec)
    assert eigenvalues == pytest.approx([-energy, energy], rel=1e-12)


@pytest.mark.parametrize("k", [0.0, math.pi, -0.1, 4.0])
def test_mode_hamiltonian_rejects_grid_closure(k: float) -> None:
    """Test that momenta outside the open interval are rejected."""
    with pytest.raises(ConfigurationError):
        mode_hamiltonian(k, -1.0, ChainSpec(8))


@given(momenta, fields, st.floats(min_value=0.1, max_value=10.0))
def test_spectrum_consistency(k: float, g: float, coupling: float) -> None:
    """Test that the mode Hamiltonian spectrum is plus or minus the dispersion."""
    spec = ChainSpec(8, coupling)
    hamiltonian = mode_hamiltonian(k, g, spec)
    lower, upper = hamiltonian.eigenvalues()
    energy = float(dispersion(k, g, spec))
    assert upper == pytest.approx(energy, rel=1e-12)
    assert lower == pytest.approx(-energy, rel=1e-12)
    assert hamiltonian.gap >= abs(hamiltonian.hx)
    numerical = np.linalg.eigvalsh(hamiltonian.matrix())
    assert numerical == pytest.approx([lower, upper], rel=1e-12, abs=1e-12)


@given(momenta, fields)
def test_angle_gives_ground_state(k: float, g: float) -> None:
    """Test that the angle builds the lower eigenvector of the mode."""
    hamiltonian = mode_hamiltonian(k, g, ChainSpec(8))
    theta = eigenstate_angles(k, g)
    state = np.array([math.cos(theta / 2), math.sin(theta / 2)], dtype=np.complex128)
    lower, _ = hamiltonian.eigenvalues()
    residual = hamiltonian.matrix() @ state - lower * state
    assert np.linalg.norm(residual) < 1e-12 * max(1.0, hamiltonian.gap)


def test_angle_anchors() -> None:
    """Test the two closed-form anchor angles on a grid."""
    for k in grid_momenta(ChainSpec(16)):
        assert eigenstate_angles(k, -5.0) == pytest.approx(
            -math.atan(math.sin(k) / (5 + math.cos(k))), abs=1e-15,
        )
        assert eigenstate_angles(k, 0.0) == pytest.approx(-k, abs=1e-15)


def test_angle_examples() -> None:
    """Test the angles at k = pi/2 and the strong-field limit."""
    assert eigenstate_angles(math.pi / 2, -5.0) == pytest.approx(-0.197396, abs=1e-6)
    assert eigenstate_angles(math.pi / 2, 0.0) == pytest.approx(-math.pi / 2)
    assert eigenstate_angles(1.0, -1e9) == pytest.approx(0.0, abs=1e-8)


def test_schedule_defaults() -> None:
    """Test the default ramp from g = -5 to g = 0."""
    schedule = QuenchSchedule(4.0)
    assert schedule.kind is ScheduleKind.LINEAR_RAMP
    assert schedule.field_span == 5.0
    assert schedule.duration == 20.0
    assert schedule.effective_chirp_factor == 1.0


@pytest.mark.parametrize("quench_time", [0.0, -1.0, float("nan"), float("inf")])
def test_schedule_rejects_bad_quench_time(quench_time: float) -> None:
    """Test that the quench time must be positive and finite."""
    with pytest.raises(ConfigurationError):
        QuenchSchedule(quench_time)


def test_schedule_rejects_decreasing_field() -> None:
    """Test that the field may not run backwards."""
    with pytest.raises(ConfigurationError):
        QuenchSchedule(1.0, g_start=0.0, g_end=-5.0)


def test_schedule_chirp_factor_validation() -> None:
    """Test that the chirp factor only applies to a positive chirp."""
    with pytest.raises(ConfigurationError):
        QuenchSchedule(1.0, chirp_factor=0.5)
    with pytest.raises(ConfigurationError):
        QuenchSchedule(1.0, kind=ScheduleKind.RESCALED_CHIRP, chirp_factor=-1.0)
    chirp = QuenchSchedule(1.0, kind=ScheduleKind.RESCALED_CHIRP)
    assert chirp.effective_chirp_factor == 0.25


def test_schedule_warns_without_crossing(caplog: pytest.LogCaptureFixture) -> None:
    """Test that a ramp which misses the critical point warns but is kept."""
    with caplog.at_level(logging.WARNING, logger="kinkpairs.modes"):
        with pytest.warns(ScheduleWarning):
            schedule = QuenchSchedule(1.0, g_start=-5.0, g_end=-2.0)
    assert schedule.g_end == -2.0
    assert "critical point" in caplog.text


def test_schedule_with_quench_time() -> None:
    """Test that a schedule can be copied with another quench time."""
    chirp = QuenchSchedule(1.0, kind=ScheduleKind.RESCALED_CHIRP, chirp_factor=0.5)
    copy = chirp.with_quench_time(3.0)
    assert copy.quench_time == 3.0
    assert copy.kind is ScheduleKind.RESCALED_CHIRP
    assert copy.chirp_factor == 0.5


def test_field_at_endpoints_and_critical_point() -> None:
    """Test the field along the default ramp."""
    schedule = QuenchSchedule(2.0)
    assert field_at(schedule, 0.0) == -5.0
    assert field_at(schedule, 1.0) == 0.0
    assert field_at(schedule, 0.8) == pytest.approx(-1.0)


@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
def test_field_at_is_monotone(s1: float, s2: float) -> None:
    """Test that the field never decreases along the ramp."""
    schedule = QuenchSchedule(2.0, g_start=-3.0, g_end=1.5)
    low, high = sorted((s1, s2))
    assert field_at(schedule, low) <= field_at(schedule, high)


@pytest.mark.parametrize("s", [-0.1, 1.1])
def test_field_at_rejects_outside_ramp(s: float) -> None:
    """Test that fractions outside [0, 1] are rejected."""
    with pytest.raises(ConfigurationError):
        field_at(QuenchSchedule(1.0), s)


def test_linear_trajectory() -> None:
    """Test the trajectory of a linear ramp."""
    trajectory = mode_trajectory(1.0, QuenchSchedule(4.0))
    assert trajectory.duration == 20.0
    assert trajectory.ramp_rate == 0.25
    assert trajectory.energy_scale == 1.0
    assert trajectory.field(4.0) == pytest.approx(-4.0)
    assert trajectory.field(100.0) == 0.0
    hx, hz = trajectory.bloch_field(0.0)
    assert hx == pytest.approx(4 * math.sin(1.0))
    assert hz == pytest.approx(4 * (-5 - math.cos(1.0)))


def test_rescaled_chirp_trajectory() -> None:
    """Test that the chirp stretches time by A sin k times its factor."""
    k = 0.5
    schedule = QuenchSchedule(4.0, kind=ScheduleKind.RESCALED_CHIRP, chirp_factor=0.5)
    trajectory = mode_trajectory(k, schedule)
    stretch = 4.0 * math.sin(k) * 0.5
    assert trajectory.duration == pytest.approx(5 * stretch)
    assert trajectory.ramp_rate == pytest.approx(1 / stretch)
    assert trajectory.energy_scale == pytest.approx(1 / math.sin(k))


def test_unit_chirp_matches_linear_ramp() -> None:
    """Test that a unit chirp factor gives the linear ramp's adiabaticity."""
    k = 1.2
    linear = mode_trajectory(k, QuenchSchedule(3.0))
    chirp = mode_trajectory(
        k,
        QuenchSchedule(3.0, kind=ScheduleKind.RESCALED_CHIRP, chirp_factor=1.0),
    )
    # sweep rate over energy scale is the same Landau-Zener parameter
    assert linear.ramp_rate / linear.energy_scale == pytest.approx(
        chirp.ramp_rate / chirp.energy_scale,
    )


def test_trajectory_rejects_closure() -> None:
    """Test that the trajectory needs a momentum inside (0, pi)."""
    with pytest.raises(ConfigurationError):
        mode_trajectory(0.0, QuenchSchedule(1.0))


def test_two_level_matrix_is_hermitian() -> None:
    """Test the matrix form of a two-level Hamiltonian."""
    matrix = TwoLevelHamiltonian(hz=1.5, hx=-0.5).matrix()
    assert np.allclose(matrix, matrix.conj().T)
    assert matrix[0, 0] == pytest.approx(0.75)


def test_ground_state_energy() -> None:
    """Test the chain ground energy at zero field and in the strong-field limit."""
    assert ground_state_energy(ChainSpec(8), 0.0) == pytest.approx(-8.0)
    spec = ChainSpec(10)
    expected = -sum(2 * math.hypot(-5 - math.cos(k), math.sin(k))
                    for k in grid_momenta(spec))
    assert ground_state_energy(spec, -5.0) == pytest.approx(expected, rel=1e-14)


def test_sudden_probability() -> None:
    """Test the excitation left by an instantaneous jump."""
    assert sudden_probability(math.pi / 2, -5.0, 0.0) == pytest.approx(0.401942, abs=1e-6)
    assert sudden_probability(1.0, -2.0, -2.0) == pytest.approx(0.0, abs=1e-15)
    ks = grid_momenta(ChainSpec(12))
    probabilities = np.asarray(sudden_probability(ks, -5.0, 0.0))
    assert np.all((probabilities >= 0) & (probabilities <= 1))

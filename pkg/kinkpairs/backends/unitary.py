"""
Closed-system evolution of a single mode through the quench.

The mode starts in the ground state of H_k(g_start), follows the schedule's
Hamiltonian by solving i d(psi)/dt = H(t) psi, and is projected on the excited
eigenstate of H_k(g_end).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Callable, Dict

import numpy as np
from scipy import integrate, linalg

from kinkpairs.exceptions import ConfigurationError, IntegrationError, NumericalError
from kinkpairs.modes import (
    ChainSpec,
    ModeTrajectory,
    QuenchSchedule,
    TwoLevelHamiltonian,
    bloch_field,
    eigenstate_angles,
    grid_momenta,
    mode_trajectory,
    sudden_probability,
)
from kinkpairs.types import ComplexArray, FloatArray, ImmutableList

from .backend import Backend, ExcitationInterface, Method, ModeResult
from .spectrum import map_modes
from .stepping import (
    GAUSS_OFFSETS,
    SUDDEN_DURATION,
    checked_probability,
    magnus_chunks,
    ordered_product,
    time_segments,
)

LOGGER = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9
NORM_DRIFT_LIMIT = 1e-8


class IntegratorMethod(Enum):
    """ODE integrators available for the mode dynamics."""

    DOP853 = "DOP853"
    RK45 = "RK45"
    RADAU = "Radau"
    MAGNUS4 = "Magnus4"


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Integrator choice and tolerances.

    The adaptive methods use the tolerances and never step further than
    ``max_step``; MAGNUS4 is a fixed-step method and uses ``max_step`` as its
    step away from the avoided crossing.
    """

    method: IntegratorMethod = IntegratorMethod.DOP853
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.1

    def __post_init__(self) -> None:
        for name in ("rel_tol", "abs_tol", "max_step"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True, eq=False)
class PureState2:
    """Normalised amplitudes (c0, c1) of one mode."""

    amplitudes: ComplexArray = field()

    def __post_init__(self) -> None:
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if amplitudes.shape != (2,):
            raise ConfigurationError(
                f"A two-level state needs 2 amplitudes, got shape {amplitudes.shape}",
            )
        drift = abs(float(np.vdot(amplitudes, amplitudes).real) - 1.0)
        if drift > NORM_TOLERANCE:
            raise NumericalError(f"State is not normalised (drift {drift:.3g})")
        object.__setattr__(self, "amplitudes", amplitudes)

    def overlap_probability(self, other: "PureState2") -> float:
        """
        Probability of finding this state in another.

        :param other: the state projected on.
        :returns: |<other|self>|^2.
        """
        return float(abs(np.vdot(other.amplitudes, self.amplitudes)) ** 2)


def ground_state(k: float, g: float) -> PureState2:
    """
    Ground state of H_k(g), cos(theta/2)|0> + sin(theta/2)|1>.

    :param k: momentum in (0, pi).
    :param g: transverse field.
    :returns: the state.
    """
    half = 0.5 * float(eigenstate_angles(k, g))
    return PureState2(np.array([math.cos(half), math.sin(half)], dtype=np.complex128))


def excited_state(k: float, g: float) -> PureState2:
    """
    Upper eigenvector of H_k(g), by diagonalisation.

    :param k: momentum in (0, pi).
    :param g: transverse field.
    :returns: the state.
    """
    hx, hz = bloch_field(k, g)
    hamiltonian = TwoLevelHamiltonian(hz=float(hz), hx=float(hx))
    _, vectors = linalg.eigh(hamiltonian.matrix())
    return PureState2(vectors[:, 1])


def prepare_ground(k: float, schedule: QuenchSchedule) -> PureState2:
    """
    Initial state of mode k for a quench.

    :param k: momentum in (0, pi).
    :param schedule: the quench.
    :returns: the ground state at g_start.
    """
    return ground_state(k, schedule.g_start)


def _schrodinger_rhs(
    trajectory: ModeTrajectory,
) -> Callable[[float, FloatArray], FloatArray]:
    """Right-hand side for psi = a + ib stored as the real vector (a, b)."""
    hx = 4.0 * math.sin(trajectory.k) * trajectory.energy_scale
    cos_k = math.cos(trajectory.k)
    scale = 4.0 * trajectory.energy_scale

    def rhs(t: float, y: FloatArray) -> FloatArray:
        g = min(trajectory.g_start + trajectory.ramp_rate * t, trajectory.g_end)
        hz = scale * (g - cos_k)
        a0, a1, b0, b1 = y
        return np.array([
            0.5 * (hz * b0 + hx * b1),
            0.5 * (hx * b0 - hz * b1),
            -0.5 * (hz * a0 + hx * a1),
            -0.5 * (hx * a0 - hz * a1),
        ])
    return rhs


def _schrodinger_jacobian(
    trajectory: ModeTrajectory,
) -> Callable[[float, FloatArray], FloatArray]:
    def jacobian(t: float, y: FloatArray) -> FloatArray:
        hx, hz = trajectory.bloch_field(t)
        h = 0.5 * np.array([[hz, hx], [hx, -hz]], dtype=np.float64)
        zero = np.zeros((2, 2))
        return np.block([[zero, h], [-h, zero]])
    return jacobian


def _adaptive_evolve(
    trajectory: ModeTrajectory,
    amplitudes: ComplexArray,
    cfg: IntegratorConfig,
    quench_time: float,
) -> ComplexArray:
    y = np.concatenate([amplitudes.real, amplitudes.imag])
    rhs = _schrodinger_rhs(trajectory)
    options: Dict[str, Callable[[float, FloatArray], FloatArray]] = {}
    if cfg.method is IntegratorMethod.RADAU:
        options["jac"] = _schrodinger_jacobian(trajectory)
    for segment in time_segments(trajectory, cfg.max_step):
        solution = integrate.solve_ivp(
            rhs,
            (segment.start, segment.stop),
            y,
            method=cfg.method.value,
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=segment.max_step,
            **options,
        )
        if not solution.success:
            raise IntegrationError(
                f"{cfg.method.value} failed: {solution.message}",
                k=trajectory.k,
                quench_time=quench_time,
            )
        y = solution.y[:, -1]
    return y[:2] + 1j * y[2:]


def magnus_propagator(trajectory: ModeTrajectory, max_step: float) -> ComplexArray:
    """
    Fourth-order Magnus propagator of a mode over the whole ramp.

    Each step of length h is exp(-i b.sigma) with
    b = (h/4)(a1 + a2) + (sqrt(3) h^2 / 24)(a2 x a1), where a1 and a2 are the
    field vectors (hx, 0, hz) at the two Gauss points of the step.

    :param trajectory: the mode's Hamiltonian path.
    :param max_step: step away from the avoided crossing.
    :returns: the 2x2 unitary.
    """
    total = np.eye(2, dtype=np.complex128)
    for segment in time_segments(trajectory, max_step):
        for left, h in magnus_chunks(segment):
            hx1, hz1 = trajectory.bloch_field(left + GAUSS_OFFSETS[0] * h)
            hx2, hz2 = trajectory.bloch_field(left + GAUSS_OFFSETS[1] * h)
            bx = 0.25 * h * (hx1 + hx2)
            by = (math.sqrt(3.0) * h * h / 24.0) * (hz2 * hx1 - hx2 * hz1)
            bz = 0.25 * h * (hz1 + hz2)
            bx, by, bz = np.broadcast_arrays(bx, by, bz)
            angle = np.sqrt(bx * bx + by * by + bz * bz)
            cosine = np.cos(angle)
            sinc = np.sinc(angle / np.pi)
            steps = np.empty((angle.size, 2, 2), dtype=np.complex128)
            steps[:, 0, 0] = cosine - 1j * sinc * bz
            steps[:, 0, 1] = -1j * sinc * bx - sinc * by
            steps[:, 1, 0] = -1j * sinc * bx + sinc * by
            steps[:, 1, 1] = cosine + 1j * sinc * bz
            total = ordered_product(steps) @ total
    return total


def propagate_state(
    trajectory: ModeTrajectory,
    initial: PureState2,
    cfg: IntegratorConfig,
    quench_time: float,
) -> ComplexArray:
    """
    Evolve a state along a trajectory.

    :param trajectory: the mode's Hamiltonian path.
    :param initial: the state at t = 0.
    :param cfg: integrator settings.
    :param quench_time: A, for diagnostics.
    :returns: final amplitudes, not renormalised.
    """
    if cfg.method is IntegratorMethod.MAGNUS4:
        return magnus_propagator(trajectory, cfg.max_step) @ initial.amplitudes
    return _adaptive_evolve(trajectory, initial.amplitudes, cfg, quench_time)


def evolve_mode(k: float, schedule: QuenchSchedule, cfg: IntegratorConfig) -> ModeResult:
    """
    Excitation probability of mode k after the quench, by integration.

    :param k: momentum in (0, pi).
    :param schedule: the quench.
    :param cfg: integrator settings.
    :returns: the result, with the norm drift of the final state.
    """
    trajectory = mode_trajectory(k, schedule)
    if trajectory.duration < SUDDEN_DURATION:
        p = float(sudden_probability(k, schedule.g_start, schedule.g_end))
        return ModeResult(k=k, p_k=p, method=Method.UNITARY)

    initial = prepare_ground(k, schedule)
    final = propagate_state(trajectory, initial, cfg, schedule.quench_time)
    drift = abs(float(np.vdot(final, final).real) - 1.0)
    if drift >= NORM_DRIFT_LIMIT:
        LOGGER.warning(
            "Norm drift %.3g for k=%r, A=%r exceeds %g",
            drift, k, schedule.quench_time, NORM_DRIFT_LIMIT,
        )
    projector = excited_state(k, schedule.g_end).amplitudes
    p = float(abs(np.vdot(projector, final)) ** 2)
    return ModeResult(
        k=k,
        p_k=checked_probability(p, k, schedule.quench_time),
        method=Method.UNITARY,
        norm_drift=drift,
    )


def excitation_spectrum(
    spec: ChainSpec,
    schedule: QuenchSchedule,
    cfg: IntegratorConfig,
    *,
    workers: int = 1,
) -> ImmutableList[ModeResult]:
    """
    Integrated excitation probabilities over the positive momentum grid.

    :param spec: the chain.
    :param schedule: the quench.
    :param cfg: integrator settings.
    :param workers: number of worker processes.
    :returns: one result per momentum, ordered by k.
    """
    results = map_modes(
        partial(evolve_mode, schedule=schedule, cfg=cfg),
        grid_momenta(spec),
        workers=workers,
        quench_time=schedule.quench_time,
    )
    LOGGER.info(
        "Integrated %d modes at A=%r with %s",
        len(results), schedule.quench_time, cfg.method.value,
    )
    return results


class UnitaryBackend(ExcitationInterface, Backend):
    """Excitation probabilities from the closed-system mode dynamics."""

    method = Method.UNITARY

    def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
        """
        Integrate mode k through the quench.

        :param k: momentum in (0, pi).
        :param schedule: the quench.
        :returns: the result.
        """
        return evolve_mode(k, schedule, self.settings.integrator)

"""
Single-mode evolution with pure dephasing.

The Lindblad equation d(rho)/dt = -i[H, rho] + gamma (L rho L - rho), with
L = n.sigma, is integrated as the equivalent Bloch-vector equation

    dr/dt = h x r - 2 gamma (r - (r.n) n),

where H = 1/2 h.sigma and n is either the qubit z axis or the instantaneous
energy axis of the mode.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict

import numpy as np
from scipy import integrate, linalg

from kinkpairs.exceptions import ConfigurationError, IntegrationError, NumericalError
from kinkpairs.modes import (
    ModeTrajectory,
    QuenchSchedule,
    eigenstate_angles,
    mode_trajectory,
    sudden_probability,
)
from kinkpairs.types import ComplexArray, FloatArray

from .backend import Backend, ExcitationInterface, Method, ModeResult
from .stepping import (
    GAUSS_OFFSETS,
    SUDDEN_DURATION,
    checked_probability,
    magnus_chunks,
    ordered_product,
    time_segments,
)
from .unitary import IntegratorConfig, IntegratorMethod, PureState2, excited_state

LOGGER = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-9
POSITIVITY_TOLERANCE = 1e-10


class DephasingBasis(Enum):
    """The axis the dephasing noise couples to."""

    QUBIT_Z = "qubit_z"
    INSTANTANEOUS_ENERGY = "instantaneous_energy"


@dataclass(frozen=True)
class DephasingConfig:
    """Dephasing rate gamma, in units of J/hbar, and its axis."""

    gamma: float = 0.0
    basis: DephasingBasis = DephasingBasis.QUBIT_Z

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ConfigurationError(
                f"Dephasing rate must be nonnegative, got {self.gamma!r}",
            )


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """A valid 2x2 density matrix."""

    matrix: ComplexArray = field()

    def __post_init__(self) -> None:
        rho = np.asarray(self.matrix, dtype=np.complex128)
        if rho.shape != (2, 2):
            raise ConfigurationError(f"Expected a 2x2 matrix, got shape {rho.shape}")
        if abs(rho[1, 0] - np.conj(rho[0, 1])) > HERMITIAN_TOLERANCE:
            raise NumericalError("Density matrix is not Hermitian")
        trace = float(np.trace(rho).real)
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise NumericalError(f"Density matrix trace is {trace!r}")
        lowest = float(linalg.eigvalsh(rho)[0])
        if lowest < -POSITIVITY_TOLERANCE:
            raise NumericalError(f"Density matrix has eigenvalue {lowest!r}")
        object.__setattr__(self, "matrix", rho)

    @classmethod
    def from_bloch(cls, r: FloatArray) -> "DensityMatrix2":
        """
        Density matrix (1 + r.sigma) / 2.

        :param r: Bloch vector.
        :returns: the density matrix.
        """
        rx, ry, rz = (float(component) for component in r)
        return cls(0.5 * np.array(
            [[1.0 + rz, rx - 1j * ry], [rx + 1j * ry, 1.0 - rz]],
            dtype=np.complex128,
        ))

    @property
    def bloch_vector(self) -> FloatArray:
        """
        Bloch vector (tr rho sigma_x, tr rho sigma_y, tr rho sigma_z).

        :returns: r.
        """
        rho = self.matrix
        return np.array([
            2.0 * rho[0, 1].real,
            -2.0 * rho[0, 1].imag,
            (rho[0, 0] - rho[1, 1]).real,
        ])

    @property
    def purity(self) -> float:
        """
        tr(rho^2).

        :returns: the purity, between 1/2 and 1.
        """
        return float(np.trace(self.matrix @ self.matrix).real)

    def population(self, state: PureState2) -> float:
        """
        Probability of finding the mode in a pure state.

        :param state: the state projected on.
        :returns: <state| rho |state>.
        """
        vector = state.amplitudes
        return float(np.vdot(vector, self.matrix @ vector).real)


def _cross_matrix(hx: FloatArray, hz: FloatArray) -> FloatArray:
    """Stack of matrices of r -> (hx, 0, hz) x r."""
    hx, hz = np.broadcast_arrays(hx, hz)
    generator = np.zeros(hx.shape + (3, 3))
    generator[..., 0, 1] = -hz
    generator[..., 1, 0] = hz
    generator[..., 1, 2] = -hx
    generator[..., 2, 1] = hx
    return generator


def _dephasing_axis(
    hx: FloatArray,
    hz: FloatArray,
    basis: DephasingBasis,
) -> FloatArray:
    hx, hz = np.broadcast_arrays(hx, hz)
    axis = np.zeros(hx.shape + (3,))
    if basis is DephasingBasis.QUBIT_Z:
        axis[..., 2] = 1.0
    else:
        norm = np.hypot(hx, hz)
        axis[..., 0] = hx / norm
        axis[..., 2] = hz / norm
    return axis


def bloch_generator(
    hx: FloatArray,
    hz: FloatArray,
    noise: DephasingConfig,
) -> FloatArray:
    """
    Generator G of dr/dt = G r.

    :param hx: sigma_x field component(s).
    :param hz: sigma_z field component(s).
    :param noise: dephasing settings.
    :returns: array of shape (..., 3, 3).
    """
    generator = _cross_matrix(hx, hz)
    if noise.gamma:
        axis = _dephasing_axis(hx, hz, noise.basis)
        projector = np.eye(3) - axis[..., :, np.newaxis] * axis[..., np.newaxis, :]
        generator = generator - 2.0 * noise.gamma * projector
    return generator


def _bloch_functions(
    trajectory: ModeTrajectory,
    noise: DephasingConfig,
) -> Dict[str, Callable[[float, FloatArray], FloatArray]]:
    def generator_at(t: float) -> FloatArray:
        hx, hz = trajectory.bloch_field(t)
        return bloch_generator(np.asarray(hx), np.asarray(hz), noise)

    def rhs(t: float, r: FloatArray) -> FloatArray:
        return generator_at(t) @ r

    def jacobian(t: float, r: FloatArray) -> FloatArray:
        return generator_at(t)

    return {"fun": rhs, "jac": jacobian}


def _adaptive_bloch(
    trajectory: ModeTrajectory,
    r: FloatArray,
    cfg: IntegratorConfig,
    noise: DephasingConfig,
    quench_time: float,
) -> FloatArray:
    functions = _bloch_functions(trajectory, noise)
    options: Dict[str, Callable[[float, FloatArray], FloatArray]] = {}
    if cfg.method is IntegratorMethod.RADAU:
        options["jac"] = functions["jac"]
    for segment in time_segments(trajectory, cfg.max_step):
        solution = integrate.solve_ivp(
            functions["fun"],
            (segment.start, segment.stop),
            r,
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
        r = solution.y[:, -1]
    return r


def magnus_bloch_propagator(
    trajectory: ModeTrajectory,
    max_step: float,
    noise: DephasingConfig,
) -> FloatArray:
    """
    Fourth-order Magnus propagator of the Bloch equation over the whole ramp.

    :param trajectory: the mode's Hamiltonian path.
    :param max_step: step away from the avoided crossing.
    :param noise: dephasing settings.
    :returns: the 3x3 propagator.
    """
    total = np.eye(3)
    for segment in time_segments(trajectory, max_step):
        for left, h in magnus_chunks(segment):
            hx1, hz1 = trajectory.bloch_field(left + GAUSS_OFFSETS[0] * h)
            hx2, hz2 = trajectory.bloch_field(left + GAUSS_OFFSETS[1] * h)
            first = bloch_generator(np.asarray(hx1), np.asarray(hz1), noise)
            second = bloch_generator(np.asarray(hx2), np.asarray(hz2), noise)
            first, second = np.broadcast_arrays(first, second)
            exponent = 0.5 * h * (first + second) + (math.sqrt(3.0) * h * h / 12.0) * (
                second @ first - first @ second
            )
            total = ordered_product(linalg.expm(exponent)) @ total
    return total


def propagate_bloch(
    trajectory: ModeTrajectory,
    initial: FloatArray,
    cfg: IntegratorConfig,
    noise: DephasingConfig,
    quench_time: float,
) -> FloatArray:
    """
    Evolve a Bloch vector along a trajectory.

    :param trajectory: the mode's Hamiltonian path.
    :param initial: the Bloch vector at t = 0.
    :param cfg: integrator settings.
    :param noise: dephasing settings.
    :param quench_time: A, for diagnostics.
    :returns: the final Bloch vector.
    """
    r = np.asarray(initial, dtype=np.float64)
    if cfg.method is IntegratorMethod.MAGNUS4:
        return magnus_bloch_propagator(trajectory, cfg.max_step, noise) @ r
    return _adaptive_bloch(trajectory, r, cfg, noise, quench_time)


def ground_bloch_vector(k: float, g: float) -> FloatArray:
    """
    Bloch vector of the ground state of H_k(g).

    :param k: momentum in (0, pi).
    :param g: transverse field.
    :returns: (sin theta, 0, cos theta).
    """
    theta = float(eigenstate_angles(k, g))
    return np.array([math.sin(theta), 0.0, math.cos(theta)])


def evolve_mode_dephased(
    k: float,
    schedule: QuenchSchedule,
    cfg: IntegratorConfig,
    noise: DephasingConfig,
) -> ModeResult:
    """
    Excitation probability of mode k after a quench with dephasing.

    :param k: momentum in (0, pi).
    :param schedule: the quench.
    :param cfg: integrator settings.
    :param noise: dephasing settings.
    :returns: the result; norm_drift holds how far |r| exceeds 1.
    :raises NumericalError: the final state is not a valid density matrix.
    """
    trajectory = mode_trajectory(k, schedule)
    if trajectory.duration < SUDDEN_DURATION:
        p = float(sudden_probability(k, schedule.g_start, schedule.g_end))
        return ModeResult(k=k, p_k=p, method=Method.DEPHASED)

    r = propagate_bloch(
        trajectory,
        ground_bloch_vector(k, schedule.g_start),
        cfg,
        noise,
        schedule.quench_time,
    )
    excess = max(0.0, float(np.linalg.norm(r)) - 1.0)
    try:
        rho = DensityMatrix2.from_bloch(r)
    except NumericalError as error:
        raise NumericalError(
            f"Dephased evolution left the state space: {error.message}",
            k=k,
            quench_time=schedule.quench_time,
        ) from error

    LOGGER.debug("k=%r, A=%r: final purity %.6f", k, schedule.quench_time, rho.purity)
    p = rho.population(excited_state(k, schedule.g_end))
    return ModeResult(
        k=k,
        p_k=checked_probability(p, k, schedule.quench_time),
        method=Method.DEPHASED,
        norm_drift=excess,
    )


class DephasedBackend(ExcitationInterface, Backend):
    """Excitation probabilities from the dephased mode dynamics."""

    method = Method.DEPHASED

    def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
        """
        Integrate mode k through the quench with dephasing.

        :param k: momentum in (0, pi).
        :param schedule: the quench.
        :returns: the result.
        """
        return evolve_mode_dephased(
            k, schedule, self.settings.integrator, self.settings.dephasing,
        )

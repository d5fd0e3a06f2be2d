"""
Momentum modes of the periodic transverse-field Ising chain.

Everything is dimensionless: energies in units of the coupling J, time in units
of hbar/J, and the quench speed enters only through A = J tau_Q / hbar.

The chain Hamiltonian splits into independent two-level problems, one for each
pair (k, -k) of the positive momentum grid

    H_k(g) = 1/2 (hz sigma_z + hx sigma_x),  hz = 4J(g - cos k),  hx = 4J sin k,

whose eigenvalues are plus and minus the quasiparticle energy epsilon_k(g).
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from kinkpairs.exceptions import ConfigurationError, ScheduleWarning
from kinkpairs.types import ComplexArray, FloatArray, ImmutableList

LOGGER = logging.getLogger(__name__)

MAX_ORACLE_SPINS = 14

# Chirp normalisations, as multiples of the exact time rescaling.
EXACT_RESCALING = 1.0
ANGULAR_RABI_PERIOD = 0.25
CYCLIC_RABI_PERIOD = math.pi / 2

ArrayLike = Union[float, FloatArray]


@dataclass(frozen=True)
class ChainSpec:
    """A periodic chain of an even number of spins with coupling J."""

    n_spins: int
    coupling: float = 1.0

    def __post_init__(self) -> None:
        if isinstance(self.n_spins, bool) or not isinstance(self.n_spins, int):
            raise ConfigurationError(
                f"n_spins must be an integer, got {self.n_spins!r}",
            )
        if self.n_spins < 4 or self.n_spins % 2:
            raise ConfigurationError(
                f"n_spins must be even and at least 4, got {self.n_spins}",
            )
        if not math.isfinite(self.coupling) or self.coupling <= 0:
            raise ConfigurationError(
                f"coupling must be positive and finite, got {self.coupling!r}",
            )

    @property
    def n_modes(self) -> int:
        """
        Number of positive momenta, one per two-level problem.

        :returns: N/2.
        """
        return self.n_spins // 2


@dataclass(frozen=True)
class MomentumMode:
    """A positive momentum k = (pi/N)(2m - 1) of the grid."""

    index: int
    k: float


class ScheduleKind(Enum):
    """The shape of the transverse-field trajectory."""

    LINEAR_RAMP = "LinearRamp"
    RESCALED_CHIRP = "RescaledChirp"


@dataclass(frozen=True)
class QuenchSchedule:
    """
    A linear ramp of the transverse field g from g_start to g_end.

    The LinearRamp crosses the field at rate 1/A in time units hbar/J. The
    RescaledChirp follows the same field path in the mode-rescaled time
    t' = t sin k under H_k / sin k, with the chirp length scaled by
    ``chirp_factor``; a factor of 1 reproduces the LinearRamp dynamics exactly.
    """

    quench_time: float
    kind: ScheduleKind = ScheduleKind.LINEAR_RAMP
    g_start: float = -5.0
    g_end: float = 0.0
    chirp_factor: Optional[float] = field(default=None)

    def __post_init__(self) -> None:
        if not math.isfinite(self.quench_time) or self.quench_time <= 0:
            raise ConfigurationError(
                f"quench_time must be positive and finite, got {self.quench_time!r}",
            )
        if not (math.isfinite(self.g_start) and math.isfinite(self.g_end)):
            raise ConfigurationError("Field endpoints must be finite.")
        if self.g_end < self.g_start:
            raise ConfigurationError(
                f"The field must not decrease: g_start={self.g_start}"
                f" > g_end={self.g_end}",
            )
        if self.chirp_factor is not None:
            if self.kind is not ScheduleKind.RESCALED_CHIRP:
                raise ConfigurationError(
                    "chirp_factor only applies to the RescaledChirp schedule",
                )
            if not math.isfinite(self.chirp_factor) or self.chirp_factor <= 0:
                raise ConfigurationError(
                    f"chirp_factor must be positive, got {self.chirp_factor!r}",
                )
        if not (self.g_start < -1 <= self.g_end):
            message = (
                f"Schedule g: {self.g_start} -> {self.g_end} does not cross the"
                f" critical point at g = -1 from the paramagnetic side"
            )
            LOGGER.warning(message)
            warnings.warn(message, ScheduleWarning, stacklevel=3)

    @property
    def field_span(self) -> float:
        """
        Total change of the transverse field.

        :returns: g_end - g_start.
        """
        return self.g_end - self.g_start

    @property
    def duration(self) -> float:
        """
        Length of the LinearRamp in units of hbar/J.

        :returns: A (g_end - g_start).
        """
        return self.quench_time * self.field_span

    @property
    def effective_chirp_factor(self) -> float:
        """
        The chirp normalisation in force for this schedule.

        :returns: the configured factor, or the kind's default.
        """
        if self.chirp_factor is not None:
            return self.chirp_factor
        if self.kind is ScheduleKind.RESCALED_CHIRP:
            return ANGULAR_RABI_PERIOD
        return EXACT_RESCALING

    def with_quench_time(self, quench_time: float) -> "QuenchSchedule":
        """
        Copy this schedule with another quench time.

        :param quench_time: the new A.
        :returns: the new schedule.
        """
        return QuenchSchedule(
            quench_time=quench_time,
            kind=self.kind,
            g_start=self.g_start,
            g_end=self.g_end,
            chirp_factor=self.chirp_factor,
        )


@dataclass(frozen=True)
class ModeTrajectory:
    """
    The time-dependent Hamiltonian seen by one mode.

    H(t) = energy_scale * H_k(g_start + ramp_rate * t) for 0 <= t <= duration.
    """

    k: float
    g_start: float
    g_end: float
    duration: float
    ramp_rate: float
    energy_scale: float

    def field(self, t: ArrayLike) -> ArrayLike:
        """
        Transverse field at time t.

        :param t: time, or an array of times.
        :returns: g(t), clipped to the end field.
        """
        return np.minimum(self.g_start + self.ramp_rate * np.asarray(t), self.g_end)

    def bloch_field(self, t: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        """
        Scaled field components (hx, hz) at time t.

        :param t: time, or an array of times.
        :returns: the sigma_x and sigma_z coefficients, times two.
        """
        hx, hz = bloch_field(self.k, self.field(t))
        return hx * self.energy_scale, hz * self.energy_scale


@dataclass(frozen=True)
class TwoLevelHamiltonian:
    """H = 1/2 (hz sigma_z + hx sigma_x) for one momentum pair."""

    hz: float
    hx: float

    @property
    def gap(self) -> float:
        """
        Splitting between the two levels.

        :returns: sqrt(hz^2 + hx^2).
        """
        return math.hypot(self.hz, self.hx)

    def matrix(self) -> ComplexArray:
        """
        The Hamiltonian as a 2x2 complex matrix.

        :returns: Hermitian matrix in the (|0>, |1>) basis.
        """
        return 0.5 * np.array(
            [[self.hz, self.hx], [self.hx, -self.hz]],
            dtype=np.complex128,
        )

    def eigenvalues(self) -> Tuple[float, float]:
        """
        Lower and upper eigenvalue.

        :returns: (-gap/2, +gap/2).
        """
        half = 0.5 * self.gap
        return -half, half


def momentum_grid(spec: ChainSpec) -> ImmutableList[MomentumMode]:
    """
    Positive half of the momentum grid, in ascending order.

    :param spec: the chain.
    :returns: the N/2 modes k = (pi/N)(2m - 1), m = 1..N/2.
    """
    return ImmutableList(
        MomentumMode(index=m, k=math.pi * (2 * m - 1) / spec.n_spins)
        for m in range(1, spec.n_modes + 1)
    )


def grid_momenta(spec: ChainSpec) -> FloatArray:
    """
    Positive grid momenta as an array.

    :param spec: the chain.
    :returns: k values, ascending.
    """
    m = np.arange(1, spec.n_modes + 1, dtype=np.float64)
    return np.pi * (2 * m - 1) / spec.n_spins


def bloch_field(k: ArrayLike, g: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    Field components of H_k in units of J.

    :param k: momentum.
    :param g: transverse field.
    :returns: (hx, hz) = (4 sin k, 4 (g - cos k)).
    """
    return 4.0 * np.sin(k), 4.0 * (g - np.cos(k))


def dispersion(k: ArrayLike, g: ArrayLike, spec: ChainSpec) -> ArrayLike:
    """
    Quasiparticle energy epsilon_k(g) = 2J sqrt((g - cos k)^2 + sin^2 k).

    :param k: momentum.
    :param g: transverse field.
    :param spec: the chain, for J.
    :returns: the nonnegative energy.
    """
    return 2.0 * spec.coupling * np.hypot(g - np.cos(k), np.sin(k))


def _check_open_momentum(k: float) -> None:
    if not 0 < k < math.pi:
        raise ConfigurationError(f"Momentum must lie strictly in (0, pi), got {k!r}")


def mode_hamiltonian(k: float, g: float, spec: ChainSpec) -> TwoLevelHamiltonian:
    """
    Two-level Hamiltonian of the (k, -k) pair at field g.

    :param k: momentum in (0, pi).
    :param g: transverse field.
    :param spec: the chain, for J.
    :returns: the Hamiltonian, with eigenvalues +-epsilon_k(g).
    """
    _check_open_momentum(k)
    hx, hz = bloch_field(k, g)
    return TwoLevelHamiltonian(
        hz=float(spec.coupling * hz),
        hx=float(spec.coupling * hx),
    )


def eigenstate_angles(k: ArrayLike, g: ArrayLike) -> ArrayLike:
    """
    Bloch polar angle of the ground state of H_k(g).

    The ground state is cos(theta/2)|0> + sin(theta/2)|1>. The angle is pinned
    so that theta(k, -5) = -arctan(sin k / (5 + cos k)) and theta(k, 0) = -k.

    :param k: momentum in (0, pi).
    :param g: transverse field.
    :returns: theta in (-pi, 0).
    """
    return -np.arctan2(np.sin(k), -(g - np.cos(k)))


def field_at(schedule: QuenchSchedule, s: float) -> float:
    """
    Field after a fraction s of the ramp.

    :param schedule: the quench.
    :param s: ramp fraction in [0, 1].
    :returns: g_start + s (g_end - g_start), with exact endpoints.
    :raises ConfigurationError: s lies outside [0, 1].
    """
    if not 0 <= s <= 1:
        raise ConfigurationError(f"Ramp fraction must lie in [0, 1], got {s!r}")
    if s == 1:
        return schedule.g_end
    return schedule.g_start + s * schedule.field_span


def mode_trajectory(k: float, schedule: QuenchSchedule) -> ModeTrajectory:
    """
    The time-dependent Hamiltonian one mode is driven with.

    :param k: momentum in (0, pi).
    :param schedule: the quench.
    :returns: the trajectory in the schedule's own time frame.
    """
    _check_open_momentum(k)
    if schedule.kind is ScheduleKind.LINEAR_RAMP:
        return ModeTrajectory(
            k=k,
            g_start=schedule.g_start,
            g_end=schedule.g_end,
            duration=schedule.duration,
            ramp_rate=1.0 / schedule.quench_time,
            energy_scale=1.0,
        )
    sin_k = math.sin(k)
    stretch = schedule.quench_time * sin_k * schedule.effective_chirp_factor
    return ModeTrajectory(
        k=k,
        g_start=schedule.g_start,
        g_end=schedule.g_end,
        duration=schedule.field_span * stretch,
        ramp_rate=1.0 / stretch,
        energy_scale=1.0 / sin_k,
    )


def ground_state_energy(spec: ChainSpec, g: float) -> float:
    """
    Ground-state energy of the chain in the even-parity sector.

    :param spec: the chain.
    :param g: transverse field.
    :returns: -sum of epsilon_k(g) over the positive grid.
    """
    energies = dispersion(grid_momenta(spec), g, spec)
    return -math.fsum(np.asarray(energies, dtype=np.float64))


def sudden_probability(k: ArrayLike, g_start: float, g_end: float) -> ArrayLike:
    """
    Excitation probability of an instantaneous field jump.

    :param k: momentum in (0, pi).
    :param g_start: field the ground state is prepared at.
    :param g_end: field the excited state is measured at.
    :returns: sin^2((theta_end - theta_start) / 2).
    """
    delta = eigenstate_angles(k, g_end) - eigenstate_angles(k, g_start)
    return np.sin(0.5 * delta) ** 2

"""
Exact state-vector dynamics of the periodic transverse-field Ising chain.

Basis state b has spin m in sigma_z = +1 when bit m of b is 0. The Hamiltonian

    H(g) = -J [sum_m sigma^z_m sigma^z_(m+1) + g sum_m sigma^x_m]

is applied matrix-free for time evolution; dense or Lanczos diagonalisation is
only used to find ground states.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Tuple

import numpy as np
import numpy.typing as npt
from scipy import integrate
from scipy.sparse import linalg as sparse_linalg

from kinkpairs.backends.stepping import GAUSS_OFFSETS, SUDDEN_DURATION
from kinkpairs.backends.unitary import IntegratorConfig, IntegratorMethod
from kinkpairs.exceptions import ConfigurationError, IntegrationError, NumericalError
from kinkpairs.modes import MAX_ORACLE_SPINS, ChainSpec, QuenchSchedule, ScheduleKind
from kinkpairs.types import ComplexArray, FloatArray

LOGGER = logging.getLogger(__name__)

IndexArray = npt.NDArray[np.int64]

# Largest chain diagonalised densely; longer chains use Lanczos.
DENSE_LIMIT = 10

NORM_TOLERANCE = 1e-9
PARITY_TOLERANCE = 1e-10
CHECKPOINTS = 11

# Matrix elements exponentiated at once by the Magnus integrator.
MAGNUS_CHUNK_ELEMENTS = 1 << 22

LANCZOS_SEED = 20240229


def _check_size(n_spins: int) -> None:
    if n_spins > MAX_ORACLE_SPINS:
        raise ConfigurationError(
            f"The exact chain is limited to {MAX_ORACLE_SPINS} spins, got {n_spins}",
        )


@lru_cache(maxsize=None)
def _chain_structure(n_spins: int) -> Tuple[FloatArray, IndexArray]:
    """Diagonal of the zz bonds and the single-flip index maps."""
    basis = np.arange(1 << n_spins, dtype=np.int64)
    signs = 1.0 - 2.0 * ((basis[np.newaxis, :] >> np.arange(n_spins)[:, np.newaxis]) & 1)
    bonds = np.sum(signs * np.roll(signs, -1, axis=0), axis=0)
    masks = 1 << np.arange(n_spins, dtype=np.int64)
    flips = basis[np.newaxis, :] ^ masks[:, np.newaxis]
    bonds.setflags(write=False)
    flips.setflags(write=False)
    return bonds, flips


def apply_parity(amplitudes: ComplexArray, n_spins: int) -> ComplexArray:
    """
    Apply the global spin flip, the product of all sigma^x.

    :param amplitudes: a state vector.
    :param n_spins: chain length.
    :returns: the flipped state vector.
    """
    basis = np.arange(1 << n_spins, dtype=np.int64)
    return amplitudes[basis ^ ((1 << n_spins) - 1)]


def odd_parity_weight(amplitudes: ComplexArray, n_spins: int) -> float:
    """
    Weight of a state in the odd sector of the global spin flip.

    :param amplitudes: a state vector.
    :param n_spins: chain length.
    :returns: the squared norm of (1 - parity)/2 applied to the state.
    """
    odd = 0.5 * (amplitudes - apply_parity(amplitudes, n_spins))
    return float(np.vdot(odd, odd).real)


@dataclass(frozen=True, eq=False)
class SpinState:
    """A normalised state vector of the chain in the sigma_z basis."""

    n_spins: int
    amplitudes: ComplexArray = field()

    def __post_init__(self) -> None:
        _check_size(self.n_spins)
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << self.n_spins,):
            raise ConfigurationError(
                f"{self.n_spins} spins need {1 << self.n_spins} amplitudes,"
                f" got shape {amplitudes.shape}",
            )
        drift = abs(float(np.vdot(amplitudes, amplitudes).real) - 1.0)
        if drift > NORM_TOLERANCE:
            raise NumericalError(f"Chain state is not normalised (drift {drift:.3g})")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis_state(cls, n_spins: int, bits: str) -> "SpinState":
        """
        A computational basis state.

        :param n_spins: chain length.
        :param bits: one character per site, site 0 first, e.g. "0101".
        :returns: the state.
        :raises ConfigurationError: the bit string does not fit the chain.
        """
        if len(bits) != n_spins or set(bits) - {"0", "1"}:
            raise ConfigurationError(f"Expected {n_spins} binary digits, got {bits!r}")
        index = sum(1 << m for m, bit in enumerate(bits) if bit == "1")
        amplitudes = np.zeros(1 << n_spins, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(n_spins, amplitudes)

    @property
    def odd_parity_weight(self) -> float:
        """
        Weight in the odd spin-flip sector.

        :returns: the weight.
        """
        return odd_parity_weight(self.amplitudes, self.n_spins)

    def fidelity(self, other: "SpinState") -> float:
        """
        Overlap probability with another state.

        :param other: a state of the same chain.
        :returns: |<other|self>|^2.
        """
        return float(abs(np.vdot(other.amplitudes, self.amplitudes)) ** 2)


@dataclass(frozen=True)
class ChainHamiltonian:
    """H(g) of a periodic chain, applied without building a matrix."""

    spec: ChainSpec
    g: float

    @property
    def dimension(self) -> int:
        """
        Hilbert space dimension.

        :returns: 2^N.
        """
        return 1 << self.spec.n_spins

    def apply(self, amplitudes: ComplexArray) -> ComplexArray:
        """
        Apply H to a state vector.

        :param amplitudes: a state vector.
        :returns: H times the state vector.
        """
        bonds, flips = _chain_structure(self.spec.n_spins)
        flipped = amplitudes[flips].sum(axis=0)
        return -self.spec.coupling * (bonds * amplitudes + self.g * flipped)

    def dense_parts(self) -> Tuple[FloatArray, FloatArray]:
        """
        The bond and field terms as dense matrices, H = bond + g * field.

        :returns: (bond, field).
        """
        bonds, flips = _chain_structure(self.spec.n_spins)
        bond = np.diag(-self.spec.coupling * bonds)
        field_term = np.zeros((self.dimension, self.dimension))
        rows = np.arange(self.dimension)
        for flip in flips:
            field_term[rows, flip] -= self.spec.coupling
        return bond, field_term

    def dense(self) -> FloatArray:
        """
        H as a dense matrix.

        :returns: the real symmetric matrix.
        """
        bond, field_term = self.dense_parts()
        return bond + self.g * field_term


def build_hamiltonian(spec: ChainSpec, g: float) -> ChainHamiltonian:
    """
    The chain Hamiltonian at field g.

    :param spec: the chain.
    :param g: transverse field.
    :returns: the Hamiltonian.
    """
    _check_size(spec.n_spins)
    return ChainHamiltonian(spec, g)


def _parity_shift(spec: ChainSpec, g: float) -> float:
    """A shift that lifts the whole odd sector above the even ground state."""
    return 2.0 * spec.n_spins * spec.coupling * (1.0 + abs(g))


def ground_state(spec: ChainSpec, g: float) -> Tuple[float, SpinState]:
    """
    Lowest state of the even spin-flip sector.

    :param spec: the chain.
    :param g: transverse field.
    :returns: (energy, state).
    """
    hamiltonian = build_hamiltonian(spec, g)
    shift = _parity_shift(spec, g)
    n = spec.n_spins
    if n <= DENSE_LIMIT:
        basis = np.arange(hamiltonian.dimension)
        parity = np.eye(hamiltonian.dimension)[basis ^ (hamiltonian.dimension - 1)]
        values, vectors = np.linalg.eigh(hamiltonian.dense() - shift * parity)
        value, vector = float(values[0]), vectors[:, 0]
    else:
        def matvec(v: ComplexArray) -> ComplexArray:
            v = np.ravel(v)
            return hamiltonian.apply(v) - shift * apply_parity(v, n)

        operator = sparse_linalg.LinearOperator(
            (hamiltonian.dimension, hamiltonian.dimension),
            matvec=matvec,
            dtype=np.float64,
        )
        start = np.random.default_rng(LANCZOS_SEED).standard_normal(hamiltonian.dimension)
        values, vectors = sparse_linalg.eigsh(
            operator, k=1, which="SA", v0=start, tol=1e-12,
        )
        value, vector = float(values[0]), vectors[:, 0]
    vector = vector / np.linalg.norm(vector)
    LOGGER.debug("Ground state of N=%d at g=%r: E=%r", n, g, value + shift)
    return value + shift, SpinState(n, vector.astype(np.complex128))


def _check_checkpoint(
    amplitudes: ComplexArray,
    n_spins: int,
    t: float,
    quench_time: float,
) -> None:
    drift = abs(float(np.vdot(amplitudes, amplitudes).real) - 1.0)
    if drift > NORM_TOLERANCE:
        raise NumericalError(
            f"Chain norm drifted by {drift:.3g} at t={t:.6g}",
            quench_time=quench_time,
        )
    odd = odd_parity_weight(amplitudes, n_spins)
    if odd > PARITY_TOLERANCE:
        raise NumericalError(
            f"Odd-parity weight {odd:.3g} at t={t:.6g}",
            quench_time=quench_time,
        )


def _field(schedule: QuenchSchedule, t: FloatArray) -> FloatArray:
    return np.minimum(schedule.g_start + t / schedule.quench_time, schedule.g_end)


def _adaptive_chain(
    spec: ChainSpec,
    schedule: QuenchSchedule,
    amplitudes: ComplexArray,
    cfg: IntegratorConfig,
) -> ComplexArray:
    coupling = spec.coupling
    bonds, flips = _chain_structure(spec.n_spins)

    def rhs(t: float, psi: ComplexArray) -> ComplexArray:
        g = min(schedule.g_start + t / schedule.quench_time, schedule.g_end)
        return 1j * coupling * (bonds * psi + g * psi[flips].sum(axis=0))

    checkpoints = np.linspace(0.0, schedule.duration, CHECKPOINTS)
    solution = integrate.solve_ivp(
        rhs,
        (0.0, schedule.duration),
        amplitudes,
        method=cfg.method.value,
        t_eval=checkpoints,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
    )
    if not solution.success:
        raise IntegrationError(
            f"{cfg.method.value} failed: {solution.message}",
            quench_time=schedule.quench_time,
        )
    for t, column in zip(solution.t, solution.y.T):
        _check_checkpoint(column, spec.n_spins, float(t), schedule.quench_time)
    return solution.y[:, -1]


def _magnus_chain(
    spec: ChainSpec,
    schedule: QuenchSchedule,
    amplitudes: ComplexArray,
    cfg: IntegratorConfig,
) -> ComplexArray:
    """
    Fourth-order Magnus steps exp(-i K), diagonalised a chunk at a time.

    With H(g) = bond + g * field, the step generator is
    K = h bond + (h/2)(g1 + g2) field - i (sqrt(3) h^2 / 12)(g1 - g2)[bond, field].
    """
    bond, field_term = build_hamiltonian(spec, 0.0).dense_parts()
    commutator = bond @ field_term - field_term @ bond
    steps = max(1, math.ceil(schedule.duration / cfg.max_step))
    h = schedule.duration / steps
    dimension = bond.shape[0]
    chunk = max(1, MAGNUS_CHUNK_ELEMENTS // (dimension * dimension))
    psi = amplitudes
    for first in range(0, steps, chunk):
        left = h * np.arange(first, min(first + chunk, steps), dtype=np.float64)
        g1 = _field(schedule, left + GAUSS_OFFSETS[0] * h)[:, np.newaxis, np.newaxis]
        g2 = _field(schedule, left + GAUSS_OFFSETS[1] * h)[:, np.newaxis, np.newaxis]
        generators = (
            h * bond
            + 0.5 * h * (g1 + g2) * field_term
            - 1j * (math.sqrt(3.0) * h * h / 12.0) * (g1 - g2) * commutator
        )
        values, vectors = np.linalg.eigh(generators)
        phases = np.exp(-1j * values)
        for phase, vector in zip(phases, vectors):
            psi = vector @ (phase * (vector.conj().T @ psi))
        _check_checkpoint(psi, spec.n_spins, float(left[-1] + h), schedule.quench_time)
    return psi


def evolve_chain(
    spec: ChainSpec,
    schedule: QuenchSchedule,
    cfg: IntegratorConfig,
) -> SpinState:
    """
    Evolve the chain's ground state at g_start through a linear ramp.

    :param spec: the chain.
    :param schedule: a LinearRamp.
    :param cfg: integrator settings; DOP853, RK45, or MAGNUS4 for dense-sized chains.
    :returns: the state at g_end.
    :raises ConfigurationError: the schedule or integrator is not supported here.
    """
    _check_size(spec.n_spins)
    if schedule.kind is not ScheduleKind.LINEAR_RAMP:
        raise ConfigurationError("The exact chain only supports the LinearRamp schedule")
    if cfg.method is IntegratorMethod.RADAU:
        raise ConfigurationError("Radau is not supported for the exact chain")
    if cfg.method is IntegratorMethod.MAGNUS4 and spec.n_spins > DENSE_LIMIT:
        raise ConfigurationError(
            f"Magnus4 on the exact chain needs at most {DENSE_LIMIT} spins",
        )

    _, initial = ground_state(spec, schedule.g_start)
    if schedule.duration < SUDDEN_DURATION:
        return initial
    if cfg.method is IntegratorMethod.MAGNUS4:
        final = _magnus_chain(spec, schedule, initial.amplitudes, cfg)
    else:
        final = _adaptive_chain(spec, schedule, initial.amplitudes, cfg)
    LOGGER.info(
        "Evolved N=%d chain through A=%r (odd weight %.2g)",
        spec.n_spins, schedule.quench_time, odd_parity_weight(final, spec.n_spins),
    )
    return SpinState(spec.n_spins, final)

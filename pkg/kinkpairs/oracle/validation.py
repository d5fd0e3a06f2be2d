"""
Agreement between the exact chain and the momentum-space pipeline.

Per-mode excitation probabilities are read off the chain state through
Jordan-Wigner fermions built in the sigma_x basis, sigma^x_m = 1 - 2 n_m:

    c_m = (prod_(j<m) sigma^x_j) a_m,    c_k = N^(-1/2) sum_m e^(-ikm) c_m.

In the even sector each pair (k, -k) is a two-level system spanned by the
empty pair and c_k^dag c_-k^dag on it, whose Bloch vector follows from
n_k = <c_k^dag c_k> and f_k = <c_-k c_k>.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy import sparse

from kinkpairs.backends.stepping import checked_probability
from kinkpairs.backends.unitary import IntegratorConfig, excitation_spectrum
from kinkpairs.counting import (
    Cumulants,
    ExcitationSpectrum,
    KinkDistribution,
    pmf_from_spectrum,
    total_variation_distance,
)
from kinkpairs.exceptions import ConfigurationError, ScheduleWarning
from kinkpairs.modes import ChainSpec, QuenchSchedule, grid_momenta
from kinkpairs.types import FloatArray

from .chain import SpinState, evolve_chain, ground_state
from .kinks import kink_pair_distribution

LOGGER = logging.getLogger(__name__)

MAX_VALIDATION_SPINS = 12
TV_TOLERANCE = 1e-4


@lru_cache(maxsize=None)
def _site_annihilators(n_spins: int) -> Tuple[sparse.csr_matrix, ...]:
    dimension = 1 << n_spins
    basis = np.arange(dimension, dtype=np.int64)
    operators = []
    for m in range(n_spins):
        bit = 1 << m
        rows = np.concatenate([basis, basis])
        cols = np.concatenate([basis & ~bit, basis | bit])
        values = np.concatenate([np.full(dimension, 0.5), np.full(dimension, -0.5)])
        lowering = sparse.csr_matrix((values, (rows, cols)), shape=(dimension, dimension))
        string = sparse.csr_matrix(
            (np.ones(dimension), (basis, basis ^ (bit - 1))),
            shape=(dimension, dimension),
        )
        operators.append((string @ lowering).tocsr())
    return tuple(operators)


def _momentum_annihilator(n_spins: int, k: float) -> sparse.csr_matrix:
    sites = _site_annihilators(n_spins)
    total = sum(
        (np.exp(-1j * k * m) * site for m, site in enumerate(sites)),
        sparse.csr_matrix((1 << n_spins, 1 << n_spins), dtype=np.complex128),
    )
    return total / math.sqrt(n_spins)


def pair_bloch_vector(state: SpinState, k: float) -> FloatArray:
    """
    Bloch vector of the (k, -k) pair in a chain state.

    :param state: an even-parity chain state.
    :param k: a positive grid momentum.
    :returns: (2 Re f_k, 2 Im f_k, 1 - 2 n_k).
    """
    psi = state.amplitudes
    lowered = _momentum_annihilator(state.n_spins, k) @ psi
    raised = _momentum_annihilator(state.n_spins, -k).conj().T @ psi
    occupation = float(np.vdot(lowered, lowered).real)
    anomalous = complex(np.vdot(raised, lowered))
    return np.array([2.0 * anomalous.real, 2.0 * anomalous.imag, 1.0 - 2.0 * occupation])


def oracle_mode_probabilities(
    state: SpinState,
    spec: ChainSpec,
    schedule: QuenchSchedule,
) -> ExcitationSpectrum:
    """
    Excitation probabilities of a chain state relative to the ground state at g_end.

    :param state: the chain state after the quench.
    :param spec: the chain.
    :param schedule: the quench, for g_end.
    :returns: p_k over the positive grid.
    """
    _, final_ground = ground_state(spec, schedule.g_end)
    probabilities: List[float] = []
    for k in grid_momenta(spec):
        r = pair_bloch_vector(state, float(k))
        reference = pair_bloch_vector(final_ground, float(k))
        p = 0.5 * (1.0 - float(np.dot(r, reference)))
        probabilities.append(checked_probability(p, float(k), schedule.quench_time))
    return ExcitationSpectrum.from_probabilities(probabilities)


@dataclass(frozen=True, eq=False)
class CrossValidationReport:
    """How closely the exact chain and the momentum-space pipeline agree."""

    spec: ChainSpec
    schedule: QuenchSchedule
    oracle: KinkDistribution
    momentum: KinkDistribution
    oracle_spectrum: ExcitationSpectrum
    momentum_spectrum: ExcitationSpectrum
    tolerance: float = TV_TOLERANCE

    @property
    def tv_distance(self) -> float:
        """
        Total-variation distance between the two P(n).

        :returns: the distance.
        """
        return total_variation_distance(self.oracle.pmf, self.momentum.pmf)

    @property
    def cumulant_deviations(self) -> Cumulants:
        """
        Absolute differences of the kink-pair cumulants.

        :returns: |delta kappa_q| for q = 1, 2, 3.
        """
        first, second, third = (
            abs(a - b) for a, b in zip(self.oracle.cumulants, self.momentum.cumulants)
        )
        return first, second, third

    @property
    def max_mode_deviation(self) -> float:
        """
        Largest per-mode difference of the excitation probabilities.

        :returns: max |p_k(oracle) - p_k(momentum)|.
        """
        return float(np.max(np.abs(
            self.oracle_spectrum.probabilities - self.momentum_spectrum.probabilities,
        )))

    @property
    def passed(self) -> bool:
        """
        Whether the distributions agree within tolerance.

        :returns: True if the TV distance is below the tolerance.
        """
        return self.tv_distance < self.tolerance


def cross_validate(
    spec: ChainSpec,
    schedule: QuenchSchedule,
    cfg: IntegratorConfig,
) -> CrossValidationReport:
    """
    Compare the exact chain with the momentum-space pipeline for one quench.

    :param spec: the chain, at most 12 spins.
    :param schedule: a LinearRamp.
    :param cfg: integrator settings used by both paths.
    :returns: the report.
    :raises ConfigurationError: the chain is too long.
    """
    if spec.n_spins > MAX_VALIDATION_SPINS:
        raise ConfigurationError(
            f"Cross-validation is limited to {MAX_VALIDATION_SPINS} spins,"
            f" got {spec.n_spins}",
        )
    if schedule.g_end != 0:
        message = (
            f"Kinks in the spin basis match excited pairs only at g_end = 0,"
            f" got g_end = {schedule.g_end}"
        )
        LOGGER.warning(message)
        warnings.warn(message, ScheduleWarning, stacklevel=2)

    state = evolve_chain(spec, schedule, cfg)
    results = excitation_spectrum(spec, schedule, cfg)
    momentum_spectrum = ExcitationSpectrum.from_probabilities([r.p_k for r in results])

    report = CrossValidationReport(
        spec=spec,
        schedule=schedule,
        oracle=kink_pair_distribution(state),
        momentum=pmf_from_spectrum(momentum_spectrum),
        oracle_spectrum=oracle_mode_probabilities(state, spec, schedule),
        momentum_spectrum=momentum_spectrum,
    )
    LOGGER.info(
        "Cross-validation N=%d, A=%r: TV distance %.3g (%s)",
        spec.n_spins,
        schedule.quench_time,
        report.tv_distance,
        "pass" if report.passed else "FAIL",
    )
    return report

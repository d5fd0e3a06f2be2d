"""
Kink-pair number distribution from per-mode excitation probabilities.

Each positive momentum k contributes one independent Bernoulli variable with
success probability p_k, so the kink-pair number follows a Poisson binomial
distribution over 0..N/2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from kinkpairs.exceptions import NumericalError
from kinkpairs.types import ComplexArray, FloatArray

from .closed_form import Cumulants, total_kink_cumulants

LOGGER = logging.getLogger(__name__)

# P(n) between this and zero is rounding error and is clamped to zero.
NEGATIVE_ROUNDOFF = -1e-14


def _frozen(values: Iterable[float]) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ExcitationSpectrum:
    """Excitation probabilities p_k over the positive momentum grid."""

    probabilities: FloatArray = field()

    def __post_init__(self) -> None:
        probabilities = _frozen(np.ravel(self.probabilities))
        if probabilities.size == 0:
            raise NumericalError("An excitation spectrum needs at least one mode")
        bad = np.flatnonzero(
            ~np.isfinite(probabilities) | (probabilities < 0) | (probabilities > 1),
        )
        if bad.size:
            index = int(bad[0])
            raise NumericalError(
                f"Excitation probability {probabilities[index]!r} of mode"
                f" {index} lies outside [0, 1]",
            )
        object.__setattr__(self, "probabilities", probabilities)

    @classmethod
    def from_probabilities(cls, probabilities: Sequence[float]) -> "ExcitationSpectrum":
        """
        Build a spectrum from plain probabilities.

        :param probabilities: p_k, ordered by k.
        :returns: the spectrum.
        """
        return cls(np.asarray(probabilities, dtype=np.float64))

    @property
    def n_modes(self) -> int:
        """
        Number of modes, N/2.

        :returns: the number of modes.
        """
        return int(self.probabilities.size)


@dataclass(frozen=True, eq=False)
class KinkDistribution:
    """P(n) over n = 0..N/2 and its first three cumulants."""

    pmf: FloatArray
    kappa1: float
    kappa2: float
    kappa3: float

    @classmethod
    def from_pmf(cls, pmf: Sequence[float]) -> "KinkDistribution":
        """
        Build a distribution from P(n), taking cumulants from its moments.

        :param pmf: P(0), P(1), ...
        :returns: the distribution.
        """
        clean = _normalised(np.asarray(pmf, dtype=np.float64))
        n = np.arange(clean.size, dtype=np.float64)
        kappa1 = math.fsum(n * clean)
        centred = n - kappa1
        return cls(
            pmf=clean,
            kappa1=kappa1,
            kappa2=math.fsum(centred ** 2 * clean),
            kappa3=math.fsum(centred ** 3 * clean),
        )

    @property
    def cumulants(self) -> Cumulants:
        """
        The kink-pair cumulants.

        :returns: (kappa_1, kappa_2, kappa_3).
        """
        return self.kappa1, self.kappa2, self.kappa3

    @property
    def total_kink_cumulants(self) -> Cumulants:
        """
        Cumulants of the total kink number.

        :returns: (2 kappa_1, 4 kappa_2, 8 kappa_3).
        """
        return total_kink_cumulants(self.cumulants)

    def moments_cumulants(self) -> Cumulants:
        """
        Cumulants recomputed from the moments of the stored PMF.

        :returns: (kappa_1, kappa_2, kappa_3).
        """
        return KinkDistribution.from_pmf(self.pmf).cumulants


def _normalised(pmf: FloatArray) -> FloatArray:
    """Clamp rounding negativity to zero and renormalise."""
    if pmf.size and float(pmf.min()) < NEGATIVE_ROUNDOFF:
        index = int(np.argmin(pmf))
        raise NumericalError(f"P({index}) = {pmf[index]!r} is negative")
    if pmf.size and float(pmf.min()) < 0:
        LOGGER.debug("Clamping P(n) rounding down to %r", float(pmf.min()))
    clipped = np.clip(pmf, 0.0, None)
    total = math.fsum(clipped)
    if not total > 0:
        raise NumericalError("Distribution has no weight")
    return _frozen(clipped / total)


def cumulants_from_spectrum(spectrum: ExcitationSpectrum) -> Cumulants:
    """
    First three cumulants of the Poisson binomial distribution.

    :param spectrum: the excitation probabilities.
    :returns: (sum p, sum p(1-p), sum p(1-p)(1-2p)), compensated sums.
    """
    p = spectrum.probabilities
    variance_terms = p * (1.0 - p)
    return (
        math.fsum(p),
        math.fsum(variance_terms),
        math.fsum(variance_terms * (1.0 - 2.0 * p)),
    )


def _with_cumulants(pmf: FloatArray, spectrum: ExcitationSpectrum) -> KinkDistribution:
    kappa1, kappa2, kappa3 = cumulants_from_spectrum(spectrum)
    return KinkDistribution(
        pmf=_normalised(pmf),
        kappa1=kappa1,
        kappa2=kappa2,
        kappa3=kappa3,
    )


def pmf_from_spectrum(spectrum: ExcitationSpectrum) -> KinkDistribution:
    """
    Exact Poisson binomial PMF by convolving in one mode at a time.

    :param spectrum: the excitation probabilities.
    :returns: the distribution over 0..N/2.
    """
    pmf = np.zeros(spectrum.n_modes + 1, dtype=np.float64)
    pmf[0] = 1.0
    for count, p in enumerate(spectrum.probabilities, start=1):
        # Only the first count+1 entries can be nonzero after count modes.
        head = pmf[:count + 1].copy()
        pmf[:count + 1] = head * (1.0 - p)
        pmf[1:count + 1] += head[:count] * p
    return _with_cumulants(pmf, spectrum)


def characteristic_function(
    spectrum: ExcitationSpectrum,
    thetas: Sequence[float],
) -> ComplexArray:
    """
    Product form of the characteristic function.

    :param spectrum: the excitation probabilities.
    :param thetas: counting fields.
    :returns: prod_k [1 + (e^(i theta) - 1) p_k] for each theta.
    """
    phases = np.exp(1j * np.asarray(thetas, dtype=np.float64))[:, np.newaxis] - 1.0
    return np.prod(1.0 + phases * spectrum.probabilities[np.newaxis, :], axis=1)


def pmf_via_characteristic(spectrum: ExcitationSpectrum) -> KinkDistribution:
    """
    Poisson binomial PMF by inverting the characteristic function.

    Meant as a cross-check of pmf_from_spectrum.

    :param spectrum: the excitation probabilities.
    :returns: the distribution over 0..N/2.
    """
    points = spectrum.n_modes + 1
    thetas = 2.0 * np.pi * np.arange(points) / points
    pmf = np.real(np.fft.fft(characteristic_function(spectrum, thetas))) / points
    return _with_cumulants(pmf, spectrum)


def total_variation_distance(first: Sequence[float], second: Sequence[float]) -> float:
    """
    Half the L1 distance between two PMFs, padding the shorter with zeros.

    :param first: a PMF.
    :param second: another PMF.
    :returns: the distance, in [0, 1].
    """
    a = np.asarray(first, dtype=np.float64)
    b = np.asarray(second, dtype=np.float64)
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    return 0.5 * math.fsum(np.abs(a - b))


def supremum_distance(first: Sequence[float], second: Sequence[float]) -> float:
    """
    Largest pointwise difference between two PMFs.

    :param first: a PMF.
    :param second: another PMF.
    :returns: the sup-norm distance.
    """
    a = np.asarray(first, dtype=np.float64)
    b = np.asarray(second, dtype=np.float64)
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    return float(np.max(np.abs(a - b)))

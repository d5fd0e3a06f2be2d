"""
Closed-form kink-pair statistics for slow linear quenches.

In the scaling limit every mode crosses its avoided level crossing with the
Landau-Zener probability p_k = exp(-2 pi A w^2), w = pi - k. Replacing the grid
sums of p_k^j by integrals gives the error-function cumulants below, and their
large-A limits are all proportional to the Kibble-Zurek mean.
"""

import cmath
import math
from enum import Enum
from typing import Dict, Tuple, Union

import numpy as np
from scipy import special

from kinkpairs.exceptions import ConfigurationError, NumericalError, OutOfDomainError
from kinkpairs.modes import ChainSpec, grid_momenta
from kinkpairs.types import FloatArray

ArrayLike = Union[float, FloatArray]
Cumulants = Tuple[float, float, float]

SCALING_CONSTANTS: Dict[int, float] = {
    1: 1.0,
    2: 1.0 - 1.0 / math.sqrt(2.0),
    3: 1.0 - 3.0 / math.sqrt(2.0) + 2.0 / math.sqrt(3.0),
}

# Weights of erf(sqrt(2 j pi^3 A)) in the exact cumulant of order q.
_ERF_WEIGHTS: Dict[int, Tuple[float, ...]] = {
    1: (1.0,),
    2: (1.0, -1.0 / math.sqrt(2.0)),
    3: (1.0, -3.0 / math.sqrt(2.0), 2.0 / math.sqrt(3.0)),
}

# Li_{3/2} is summed directly inside this radius and by its expansion around
# z = 1 outside it.
_DIRECT_SERIES_RADIUS = 0.5
_SERIES_TAIL = 1e-14
_UNIT_DISC_SLACK = 1e-12

_ZETA_ONE_HALF = -1.4603545088095868
_LOG_SERIES_TERMS = 90


class ClosedFormKind(Enum):
    """The closed-form expressions available."""

    LZ_FORMULA = "LZFormula"
    ERF_EXACT = "ErfExact"
    SCALING_LIMIT = "ScalingLimit"
    GAUSSIAN_PMF = "GaussianPMF"
    POLYLOG_CF = "PolylogCF"


class LZForm(Enum):
    """
    Exponent used in the Landau-Zener probability.

    SOFT_MODE expands the gap around the soft momentum k = pi and is the form
    integrated into the error-function cumulants. FULL_GAP keeps sin^2 k and is
    exact for a ramp from -infinity to +infinity.
    """

    SOFT_MODE = "SoftMode"
    FULL_GAP = "FullGap"


def _check_quench_time(quench_time: float) -> None:
    if not quench_time > 0:
        raise ConfigurationError(f"quench_time must be positive, got {quench_time!r}")


def _check_order(q: int) -> None:
    if q not in SCALING_CONSTANTS:
        raise ConfigurationError(f"Cumulant order must be 1, 2 or 3, got {q!r}")


def _check_spins(n_spins: int) -> None:
    if n_spins <= 0:
        raise ConfigurationError(f"n_spins must be positive, got {n_spins!r}")


def lz_probability(
    k: ArrayLike,
    quench_time: float,
    form: LZForm = LZForm.SOFT_MODE,
) -> ArrayLike:
    """
    Landau-Zener excitation probability of mode k.

    :param k: momentum in (0, pi).
    :param quench_time: A.
    :param form: which exponent to use.
    :returns: exp(-2 pi A w^2), with w = pi - k or w = sin k.
    """
    _check_quench_time(quench_time)
    if form is LZForm.FULL_GAP:
        distance = np.sin(k)
    else:
        distance = np.pi - np.asarray(k)
    return np.exp(-2.0 * np.pi * quench_time * distance ** 2)


def kzm_mean(n_spins: int, quench_time: float) -> float:
    """
    Kibble-Zurek mean number of kink pairs.

    :param n_spins: chain length N.
    :param quench_time: A.
    :returns: (N / 4 pi) / sqrt(2 A).
    """
    _check_spins(n_spins)
    _check_quench_time(quench_time)
    return n_spins / (4.0 * math.pi * math.sqrt(2.0 * quench_time))


def exact_cumulant(q: int, n_spins: int, quench_time: float) -> float:
    """
    Cumulant of order q of the continuum Landau-Zener distribution.

    Valid down to fast quenches, where the error functions have not saturated.

    :param q: order, 1 to 3.
    :param n_spins: chain length N.
    :param quench_time: A.
    :returns: kappa_q.
    """
    _check_order(q)
    mean = kzm_mean(n_spins, quench_time)
    erfs = (
        special.erf(math.sqrt(2.0 * j * math.pi ** 3 * quench_time))
        for j in range(1, q + 1)
    )
    return mean * math.fsum(
        weight * float(value) for weight, value in zip(_ERF_WEIGHTS[q], erfs)
    )


def scaling_cumulant(q: int, n_spins: int, quench_time: float) -> float:
    """
    Cumulant of order q in the scaling limit, c_q times the KZM mean.

    :param q: order, 1 to 3.
    :param n_spins: chain length N.
    :param quench_time: A.
    :returns: kappa_q.
    """
    _check_order(q)
    return SCALING_CONSTANTS[q] * kzm_mean(n_spins, quench_time)


def scaling_onset(q: int) -> float:
    """
    Quench time above which the cumulant of order q is in the scaling limit.

    :param q: order, at least 1.
    :returns: 2 / (q pi^3).
    :raises ConfigurationError: q is not a positive integer.
    """
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise ConfigurationError(f"Cumulant order must be a positive integer, got {q!r}")
    return 2.0 / (q * math.pi ** 3)


def closed_form_cumulant(
    kind: ClosedFormKind,
    q: int,
    n_spins: int,
    quench_time: float,
) -> float:
    """
    Cumulant of order q from one of the closed forms.

    LZ_FORMULA sums the Bernoulli cumulants of the soft-mode Landau-Zener
    probabilities over the momentum grid. ERF_EXACT is the continuum of that sum
    and SCALING_LIMIT its large-A limit, which is also what the polylogarithm
    characteristic function generates. GAUSSIAN_PMF has variance 3 <n> / pi^2
    and no skew.

    :param kind: which closed form.
    :param q: order, 1 to 3.
    :param n_spins: chain length N.
    :param quench_time: A.
    :returns: kappa_q.
    """
    _check_order(q)
    if kind is ClosedFormKind.LZ_FORMULA:
        p = np.asarray(lz_probability(grid_momenta(ChainSpec(n_spins)), quench_time))
        terms = (p, p * (1 - p), p * (1 - p) * (1 - 2 * p))[q - 1]
        return math.fsum(terms.tolist())
    if kind is ClosedFormKind.ERF_EXACT:
        return exact_cumulant(q, n_spins, quench_time)
    if kind in (ClosedFormKind.SCALING_LIMIT, ClosedFormKind.POLYLOG_CF):
        return scaling_cumulant(q, n_spins, quench_time)
    mean = kzm_mean(n_spins, quench_time)
    return (mean, 3.0 * mean / math.pi ** 2, 0.0)[q - 1]


def gaussian_pmf(n: ArrayLike, mean_kzm: float) -> ArrayLike:
    """
    Normal approximation to P(n) with variance 3 <n> / pi^2.

    :param n: kink-pair number(s).
    :param mean_kzm: the KZM mean.
    :returns: (6 <n> / pi)^(-1/2) exp(-pi^2 (n - <n>)^2 / (6 <n>)).
    """
    if not mean_kzm > 0:
        raise ConfigurationError(f"mean_kzm must be positive, got {mean_kzm!r}")
    n = np.asarray(n, dtype=np.float64)
    return np.exp(-np.pi ** 2 * (n - mean_kzm) ** 2 / (6.0 * mean_kzm)) / math.sqrt(
        6.0 * mean_kzm / math.pi,
    )


def gaussian_pmf_exact_variance(n: ArrayLike, mean_kzm: float) -> ArrayLike:
    """
    Normal approximation to P(n) with the scaling-limit variance c_2 <n>.

    :param n: kink-pair number(s).
    :param mean_kzm: the KZM mean.
    :returns: normal density at n.
    """
    if not mean_kzm > 0:
        raise ConfigurationError(f"mean_kzm must be positive, got {mean_kzm!r}")
    variance = SCALING_CONSTANTS[2] * mean_kzm
    n = np.asarray(n, dtype=np.float64)
    return np.exp(-((n - mean_kzm) ** 2) / (2.0 * variance)) / math.sqrt(
        2.0 * math.pi * variance,
    )


def _log_series_coefficients() -> FloatArray:
    """
    zeta(3/2 - n) / n! for n = 0, 1, 2, ...

    Negative arguments go through the functional equation
    zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s).
    """
    coefficients = np.empty(_LOG_SERIES_TERMS, dtype=np.float64)
    coefficients[0] = special.zeta(1.5)
    coefficients[1] = _ZETA_ONE_HALF
    n = np.arange(2, _LOG_SERIES_TERMS, dtype=np.float64)
    s = 1.5 - n
    log_magnitude = (
        s * math.log(2.0)
        + (s - 1.0) * math.log(math.pi)
        + special.gammaln(1.0 - s)
        - special.gammaln(n + 1.0)
    )
    coefficients[2:] = (
        np.exp(log_magnitude) * np.sin(np.pi * s / 2.0) * special.zeta(1.0 - s)
    )
    return coefficients


_LOG_SERIES = _log_series_coefficients()


def polylog_3_2(z: complex) -> complex:
    """
    Polylogarithm of order 3/2 on the closed unit disc.

    :param z: argument with |z| <= 1.
    :returns: Li_{3/2}(z).
    :raises OutOfDomainError: |z| > 1.
    """
    z = complex(z)
    radius = abs(z)
    if radius > 1.0 + _UNIT_DISC_SLACK:
        raise OutOfDomainError(
            f"Li_3/2 is only evaluated on the unit disc, got |z| = {radius!r}",
        )
    if radius == 0.0:
        return 0j
    if radius <= _DIRECT_SERIES_RADIUS:
        # Smallest P with r^(P+1) / ((1 - r)(P+1)^1.5) below the tail bound.
        terms = 1
        while radius ** (terms + 1) / ((1 - radius) * (terms + 1) ** 1.5) >= _SERIES_TAIL:
            terms += 1
        powers = np.arange(1, terms + 1, dtype=np.float64)
        return complex(np.sum(z ** powers / powers ** 1.5))

    # Li_s(e^mu) = Gamma(1 - s)(-mu)^(s-1) + sum_n zeta(s - n) mu^n / n!, |mu| < 2 pi.
    mu = cmath.log(z)
    singular = -2.0 * math.sqrt(math.pi) * cmath.sqrt(-mu)
    powers = mu ** np.arange(_LOG_SERIES_TERMS, dtype=np.float64)
    return singular + complex(np.sum(_LOG_SERIES * powers))


def polylog_characteristic(theta: float, mean_kzm: float) -> complex:
    """
    Characteristic function of P(n) in the scaling limit.

    :param theta: counting field, with |1 - e^(i theta)| <= 1.
    :param mean_kzm: the KZM mean.
    :returns: exp(-<n> Li_{3/2}(1 - e^(i theta))).
    :raises OutOfDomainError: theta lies outside |theta| <= pi/3 (mod 2 pi).
    """
    z = 1.0 - cmath.exp(1j * theta)
    if abs(z) > 1.0 + _UNIT_DISC_SLACK:
        raise OutOfDomainError(
            f"theta={theta!r} needs Li_3/2 outside the unit disc (|z| = {abs(z)!r})",
        )
    return cmath.exp(-mean_kzm * polylog_3_2(z))


def total_kink_cumulants(pair_cumulants: Cumulants) -> Cumulants:
    """
    Cumulants of the total kink number from those of the kink-pair number.

    :param pair_cumulants: (kappa_1, kappa_2, kappa_3) of the pair number.
    :returns: (2 kappa_1, 4 kappa_2, 8 kappa_3).
    """
    kappa1, kappa2, kappa3 = pair_cumulants
    return 2.0 * kappa1, 4.0 * kappa2, 8.0 * kappa3


def skewness(kappa2: float, kappa3: float) -> float:
    """
    Skewness kappa_3 / kappa_2^(3/2).

    :param kappa2: variance.
    :param kappa3: third cumulant.
    :returns: the skewness.
    :raises NumericalError: the variance is not positive.
    """
    if not kappa2 > 0:
        raise NumericalError(f"Skewness undefined for variance {kappa2!r}")
    return kappa3 / kappa2 ** 1.5

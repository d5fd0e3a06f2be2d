"""Power-law fits of cumulants against the quench time."""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from kinkpairs.backends import Method
from kinkpairs.exceptions import ConfigurationError, FitWarning, NumericalError
from kinkpairs.types import FloatArray

from .runner import SweepRecord

LOGGER = logging.getLogger(__name__)

MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class PowerLawFit:
    """kappa_q = amplitude * A^exponent over a window of quench times."""

    q: int
    method: Method
    exponent: float
    amplitude: float
    stderr: float
    window: Tuple[float, float]

    def __post_init__(self) -> None:
        if not self.stderr >= 0:
            raise NumericalError(f"Fit standard error {self.stderr!r} is negative")


def _line(x: FloatArray, slope: float, intercept: float) -> FloatArray:
    return slope * x + intercept


def _warn_if_not_monotone(values: FloatArray, q: int, method: Method) -> None:
    steps = np.sign(np.diff(values))
    if steps.size and np.any(steps != steps[0]):
        message = (
            f"kappa_{q} of {method.value} is not monotone in A; the data are not"
            f" a single power law"
        )
        LOGGER.warning(message)
        warnings.warn(message, FitWarning, stacklevel=3)


def fit_power_law(
    records: Sequence[SweepRecord],
    q: int,
    window: Tuple[float, float],
) -> PowerLawFit:
    """
    Least-squares line through (log A, log kappa_q) inside a window.

    :param records: records of a single method.
    :param q: cumulant order, 1 to 3.
    :param window: inclusive range of A to fit.
    :returns: the fit.
    :raises ConfigurationError: the records mix methods or too few lie in the window.
    :raises NumericalError: a cumulant in the window is not positive.
    """
    if q not in (1, 2, 3):
        raise ConfigurationError(f"Cumulant order must be 1, 2 or 3, got {q!r}")
    methods = {record.method for record in records}
    if len(methods) != 1:
        raise ConfigurationError(
            f"Fit records of exactly one method, got {sorted(m.value for m in methods)}",
        )
    (method,) = methods

    low, high = window
    selected = sorted(
        (record for record in records if low <= record.quench_time <= high),
        key=lambda record: record.quench_time,
    )
    if len(selected) < MIN_FIT_POINTS:
        raise ConfigurationError(
            f"Need at least {MIN_FIT_POINTS} records in the window {window!r},"
            f" got {len(selected)}",
        )
    for record in selected:
        if not record.cumulant(q) > 0:
            raise NumericalError(
                f"kappa_{q} = {record.cumulant(q)!r} is not positive",
                quench_time=record.quench_time,
            )

    quench_times = np.array([record.quench_time for record in selected])
    values = np.array([record.cumulant(q) for record in selected])
    _warn_if_not_monotone(values, q, method)

    x, y = np.log(quench_times), np.log(values)
    start = np.polyfit(x, y, 1)
    parameters, covariance = optimize.curve_fit(_line, x, y, p0=start)
    stderr = math.sqrt(max(0.0, float(covariance[0, 0])))
    fit = PowerLawFit(
        q=q,
        method=method,
        exponent=float(parameters[0]),
        amplitude=math.exp(float(parameters[1])),
        stderr=stderr,
        window=(float(low), float(high)),
    )
    LOGGER.info(
        "kappa_%d of %s ~ A^(%.4f +- %.2g) on %r",
        q, method.value, fit.exponent, fit.stderr, fit.window,
    )
    return fit


def fit_records(
    records: Sequence[SweepRecord],
    window: Tuple[float, float],
    orders: Sequence[int] = (1, 2, 3),
    methods: Optional[Sequence[Method]] = None,
) -> List[PowerLawFit]:
    """
    Fit every cumulant order of every method that can be fitted.

    Orders that cannot be fitted are logged and skipped.

    :param records: records of any number of methods.
    :param window: inclusive range of A to fit.
    :param orders: cumulant orders to fit.
    :param methods: methods to fit, in output order; all present if None.
    :returns: the fits.
    """
    if methods is None:
        methods = sorted({record.method for record in records}, key=lambda m: m.value)
    fits = []
    for method in methods:
        own = [record for record in records if record.method is method]
        for q in orders:
            try:
                fits.append(fit_power_law(own, q, window))
            except (ConfigurationError, NumericalError) as error:
                LOGGER.warning("Skipping kappa_%d fit of %s: %s", q, method.value, error)
    return fits

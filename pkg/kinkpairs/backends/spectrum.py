"""Deterministic maps of per-mode and per-point computations."""

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

from kinkpairs.exceptions import ConfigurationError, NumericalError, SpectrumError
from kinkpairs.types import ImmutableList

LOGGER = logging.getLogger(__name__)

S = TypeVar("S")
T = TypeVar("T")


def _attempt(
    func: Callable[[float], T],
    k: float,
) -> Union[T, NumericalError]:
    try:
        return func(k)
    except NumericalError as error:
        return error


def ordered_map(
    func: Callable[[S], T],
    items: Sequence[S],
    *,
    workers: int = 1,
) -> List[T]:
    """
    Apply ``func`` to every item, over a process pool when workers > 1.

    The results come back in input order whatever the scheduling.

    :param func: the computation; must be picklable if workers > 1.
    :param items: the inputs.
    :param workers: number of worker processes.
    :returns: one result per item.
    :raises ConfigurationError: workers is not positive.
    """
    if workers < 1:
        raise ConfigurationError(f"workers must be at least 1, got {workers}")
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def map_modes(
    func: Callable[[float], T],
    momenta: Iterable[float],
    *,
    workers: int = 1,
    quench_time: Optional[float] = None,
) -> ImmutableList[T]:
    """
    Apply ``func`` to every momentum and collect the results in grid order.

    Every mode is attempted, even after one of them has failed, so that a
    failure report covers the whole grid. With more than one worker the modes
    are spread over a process pool; the results are reassembled in input order,
    so they do not depend on scheduling.

    :param func: per-mode computation; must be picklable if workers > 1.
    :param momenta: the grid, in the order results should come back in.
    :param workers: number of worker processes.
    :param quench_time: A, used to label failures.
    :returns: the results, one per momentum.
    :raises ConfigurationError: workers is not positive.
    :raises SpectrumError: at least one mode failed.
    """
    ks = [float(k) for k in momenta]
    outcomes = ordered_map(partial(_attempt, func), ks, workers=workers)

    failures: List[Tuple[float, NumericalError]] = [
        (k, outcome)
        for k, outcome in zip(ks, outcomes)
        if isinstance(outcome, NumericalError)
    ]
    if failures:
        LOGGER.error("%d of %d modes failed", len(failures), len(ks))
        raise SpectrumError(failures, quench_time=quench_time)

    LOGGER.debug("Computed %d modes with %d worker(s)", len(ks), workers)
    return ImmutableList(
        outcome for outcome in outcomes if not isinstance(outcome, NumericalError)
    )

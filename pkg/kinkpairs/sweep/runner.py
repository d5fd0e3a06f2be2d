"""Run quench-time sweeps over one or more excitation methods."""

import logging
import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from functools import partial
from typing import List, Optional, Tuple, Union

from kinkpairs.backends import (
    Backend,
    BackendSettings,
    Method,
    MethodEnvironment,
    ModeResult,
    default_environment,
    ordered_map,
)
from kinkpairs.counting import (
    Cumulants,
    ExcitationSpectrum,
    pmf_from_spectrum,
    total_kink_cumulants,
)
from kinkpairs.exceptions import NumericalError
from kinkpairs.types import FloatArray, ImmutableList

from .config import SweepConfig

LOGGER = logging.getLogger(__name__)


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class SweepRecord:
    """
    Kink-pair cumulants of one method at one quench time.

    The PMF and timestamps are carried along for output but take no part in
    comparisons.
    """

    quench_time: float
    method: Method
    kappa1: float
    kappa2: float
    kappa3: float
    gamma: float
    config_hash: str
    pmf: Optional[FloatArray] = field(default=None, compare=False, repr=False)
    started_at: Optional[str] = field(default=None, compare=False)
    finished_at: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for value in self.cumulants:
            if not math.isfinite(value):
                raise NumericalError(
                    f"Non-finite cumulant in record for {self.method.value}",
                    quench_time=self.quench_time,
                )
        if self.kappa2 < 0:
            raise NumericalError(
                f"Negative variance {self.kappa2!r} for {self.method.value}",
                quench_time=self.quench_time,
            )

    @property
    def cumulants(self) -> Cumulants:
        """
        Kink-pair cumulants.

        :returns: (kappa_1, kappa_2, kappa_3).
        """
        return self.kappa1, self.kappa2, self.kappa3

    @property
    def total_kink_cumulants(self) -> Cumulants:
        """
        Cumulants of the total kink number.

        :returns: 2^q kappa_q for q = 1, 2, 3.
        """
        return total_kink_cumulants(self.cumulants)

    def cumulant(self, q: int) -> float:
        """
        One kink-pair cumulant.

        :param q: order, 1 to 3.
        :returns: kappa_q.
        """
        return self.cumulants[q - 1]


@dataclass(frozen=True)
class SweepFailure:
    """A sweep point that could not be computed."""

    quench_time: float
    method: Method
    error: str
    message: str


@dataclass(frozen=True)
class SweepResult:
    """Records and failures of a sweep, in sweep order."""

    config: SweepConfig
    records: Tuple[SweepRecord, ...]
    failures: Tuple[SweepFailure, ...]

    def records_for(self, method: Method) -> List[SweepRecord]:
        """
        The records of one method.

        :param method: the method.
        :returns: its records, by ascending A.
        """
        return [record for record in self.records if record.method is method]


def compute_record(
    backend: Backend,
    cfg: SweepConfig,
    quench_time: float,
) -> SweepRecord:
    """
    Compute one sweep point.

    :param backend: the backend of the method.
    :param cfg: the sweep configuration.
    :param quench_time: A.
    :returns: the record.
    """
    started_at = _timestamp()
    schedule = cfg.schedule_for(quench_time)
    results = backend.excitation_spectrum(cfg.chain, schedule)
    spectrum = ExcitationSpectrum.from_probabilities([result.p_k for result in results])
    distribution = pmf_from_spectrum(spectrum)
    method: Method = backend.method  # type: ignore[assignment]
    return SweepRecord(
        quench_time=quench_time,
        method=method,
        kappa1=distribution.kappa1,
        kappa2=distribution.kappa2,
        kappa3=distribution.kappa3,
        gamma=cfg.gamma if method is Method.DEPHASED else 0.0,
        config_hash=cfg.config_hash,
        pmf=distribution.pmf,
        started_at=started_at,
        finished_at=_timestamp(),
    )


def excitation_results(
    cfg: SweepConfig,
    method: Method,
    quench_time: float,
    environment: Optional[MethodEnvironment] = None,
) -> ImmutableList[ModeResult]:
    """
    Per-mode results of one method at one quench time.

    :param cfg: the configuration.
    :param method: the method.
    :param quench_time: A.
    :param environment: where to look the backend up; the default environment if None.
    :returns: the per-mode results, ordered by k.
    """
    environment = environment or default_environment()
    backend = environment.create_backend(method, cfg.backend_settings())
    return backend.excitation_spectrum(cfg.chain, cfg.schedule_for(quench_time))


def _evaluate_point(
    point: Tuple[float, Method],
    cfg: SweepConfig,
    environment: MethodEnvironment,
    settings: BackendSettings,
) -> Union[SweepRecord, SweepFailure]:
    quench_time, method = point
    backend = environment.create_backend(method, settings)
    try:
        return compute_record(backend, cfg, quench_time)
    except NumericalError as error:
        return SweepFailure(
            quench_time=quench_time,
            method=method,
            error=type(error).__name__,
            message=str(error),
        )


def run_sweep(
    cfg: SweepConfig,
    environment: Optional[MethodEnvironment] = None,
) -> SweepResult:
    """
    Compute one record per quench time and method.

    A failing point is logged and recorded as a failure; the sweep carries on
    with the remaining points. With more than one worker and more than one
    point, the points are spread over a process pool and the modes of each
    point are evaluated in its worker; otherwise the workers go to the modes.

    :param cfg: the configuration.
    :param environment: where to look backends up; the default environment if None.
    :returns: the records and failures, in sweep order.
    """
    environment = environment or default_environment()
    for method in cfg.methods:
        environment.get_backend(method)

    points = [
        (quench_time, method)
        for quench_time in cfg.a_values
        for method in cfg.methods
    ]
    settings = cfg.backend_settings()
    workers = 1
    if cfg.workers > 1 and len(points) > 1:
        workers, settings = cfg.workers, replace(settings, workers=1)
    outcomes = ordered_map(
        partial(_evaluate_point, cfg=cfg, environment=environment, settings=settings),
        points,
        workers=workers,
    )

    records: List[SweepRecord] = []
    failures: List[SweepFailure] = []
    for index, outcome in enumerate(outcomes, start=1):
        if isinstance(outcome, SweepFailure):
            LOGGER.warning(
                "%s failed at A=%r: %s",
                outcome.method.value, outcome.quench_time, outcome.message,
            )
            failures.append(outcome)
            continue
        records.append(outcome)
        LOGGER.info(
            "[%d/%d] %s A=%r: kappa = (%.6g, %.6g, %.6g)",
            index, len(points), outcome.method.value, outcome.quench_time,
            *outcome.cumulants,
        )
    return SweepResult(config=cfg, records=tuple(records), failures=tuple(failures))

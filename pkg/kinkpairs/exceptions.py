"""Exceptions for kinkpairs."""

from typing import List, Optional, Tuple


class KinkPairsException(Exception):
    """An exception thrown by kinkpairs."""


class ConfigurationError(KinkPairsException, ValueError):
    """A chain, schedule, integrator, dephasing or sweep setting is invalid."""


class NumericalError(KinkPairsException, ArithmeticError):
    """
    A numerical computation failed or produced an invalid value.

    The momentum and quench time of the offending mode are kept when known, so
    that a failure inside a whole spectrum or sweep can be traced back.
    """

    def __init__(
        self,
        message: str,
        *,
        k: Optional[float] = None,
        quench_time: Optional[float] = None,
    ) -> None:
        details = []
        if k is not None:
            details.append(f"k={k!r}")
        if quench_time is not None:
            details.append(f"A={quench_time!r}")
        suffix = f" ({', '.join(details)})" if details else ""
        super().__init__(f"{message}{suffix}")
        self.message = message
        self.k = k
        self.quench_time = quench_time

    def __reduce__(self):  # type: ignore
        """
        Support pickling across process pools.

        :returns: reconstruction recipe keeping the keyword context.
        """
        return _rebuild_numerical_error, (
            type(self), self.message, self.k, self.quench_time,
        )


def _rebuild_numerical_error(
    cls: type,
    message: str,
    k: Optional[float],
    quench_time: Optional[float],
) -> NumericalError:
    error: NumericalError = cls(message, k=k, quench_time=quench_time)
    return error


class IntegrationError(NumericalError):
    """The ODE solver reported a failure, for example a step size underflow."""


class SpectrumError(NumericalError):
    """
    One or more modes of an excitation spectrum failed.

    All per-mode failures are collected before this is raised, so that the
    diagnostics cover the whole spectrum rather than the first bad mode.
    """

    def __init__(
        self,
        failures: List[Tuple[float, NumericalError]],
        *,
        quench_time: Optional[float] = None,
    ) -> None:
        listing = "; ".join(f"k={k:.6g}: {error.message}" for k, error in failures)
        super().__init__(
            f"{len(failures)} mode(s) failed: {listing}",
            quench_time=quench_time,
        )
        self.failures = failures

    def __reduce__(self):  # type: ignore
        """
        Support pickling across process pools.

        :returns: reconstruction recipe keeping the failure list.
        """
        return type(self), (self.failures,), {"quench_time": self.quench_time}

    def __setstate__(self, state):  # type: ignore
        self.quench_time = state["quench_time"]


class OutOfDomainError(KinkPairsException, ValueError):
    """An analytic expression was evaluated outside the region it supports."""


class OutputError(KinkPairsException, OSError):
    """Reading or writing a result or configuration file failed."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{message}: {path}")
        self.path = path


class ScheduleWarning(UserWarning):
    """A quench schedule is usable but does not cross the critical point."""


class FitWarning(UserWarning):
    """The data handed to a power-law fit does not look like a power law."""

"""Utility classes for testing environments and backends."""

from kinkpairs.backends import Backend, ExcitationInterface, Method, ModeResult
from kinkpairs.exceptions import NumericalError
from kinkpairs.modes import QuenchSchedule


class MockBackend(ExcitationInterface, Backend):
    """A test backend that excites every mode with probability k / 3.2."""

    method = Method.CLOSED_FORM

    def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
        """Return a probability that only depends on k."""
        return ModeResult(k=k, p_k=k / 3.2, method=Method.CLOSED_FORM)


class MockUnitaryBackend(ExcitationInterface, Backend):
    """A test backend standing in for the unitary method."""

    method = Method.UNITARY

    def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
        """Return one half for every mode."""
        return ModeResult(k=k, p_k=0.5, method=Method.UNITARY)


class FailingBackend(ExcitationInterface, Backend):
    """A test backend that fails on the upper half of the grid."""

    method = Method.DEPHASED

    def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
        """Fail for k above pi / 2."""
        if k > 1.5707963267948966:
            raise NumericalError("mock failure", k=k, quench_time=schedule.quench_time)
        return ModeResult(k=k, p_k=0.0, method=Method.DEPHASED)

"""Landau-Zener excitation probabilities without any integration."""

from kinkpairs.counting.closed_form import lz_probability
from kinkpairs.modes import QuenchSchedule

from .backend import Backend, ExcitationInterface, Method, ModeResult


class ClosedFormBackend(ExcitationInterface, Backend):
    """
    Excitation probabilities from the Landau-Zener formula.

    The formula assumes a full crossing of the critical point, so the field
    endpoints of the schedule are ignored. The RescaledChirp enters through its
    effective quench time A * chirp_factor.
    """

    method = Method.CLOSED_FORM

    def mode_probability(self, k: float, schedule: QuenchSchedule) -> ModeResult:
        """
        Evaluate the Landau-Zener probability of mode k.

        :param k: momentum in (0, pi).
        :param schedule: the quench.
        :returns: the result.
        """
        quench_time = schedule.quench_time * schedule.effective_chirp_factor
        p = float(lz_probability(k, quench_time, self.settings.lz_form))
        return ModeResult(k=k, p_k=p, method=Method.CLOSED_FORM)

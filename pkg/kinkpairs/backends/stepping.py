"""Time stepping shared by the mode integrators."""

import math
from dataclasses import dataclass
from typing import Iterator, List, Tuple, TypeVar

import numpy as np

from kinkpairs.exceptions import NumericalError
from kinkpairs.modes import ModeTrajectory
from kinkpairs.types import ComplexArray, FloatArray

MatrixStack = TypeVar("MatrixStack", ComplexArray, FloatArray)

# Ramps shorter than this are treated as an instantaneous field jump.
SUDDEN_DURATION = 1e-8

# The avoided crossing is the stretch with |g - cos k| <= width * sin k.
CROSSING_HALF_WIDTH = 5.0
CROSSING_STEPS = 200

PROBABILITY_SLACK = 1e-9

# Steps exponentiated at once by the Magnus integrators.
CHUNK_STEPS = 1 << 16

GAUSS_OFFSETS = (0.5 - math.sqrt(3.0) / 6.0, 0.5 + math.sqrt(3.0) / 6.0)


@dataclass(frozen=True)
class Segment:
    """A stretch of the ramp integrated with one step-size cap."""

    start: float
    stop: float
    max_step: float

    @property
    def step_count(self) -> int:
        """
        Number of equal steps no longer than the cap.

        :returns: the step count, at least 1.
        """
        return max(1, math.ceil((self.stop - self.start) / self.max_step))


def time_segments(trajectory: ModeTrajectory, max_step: float) -> List[Segment]:
    """
    Split the ramp so that the avoided crossing gets a finer step.

    ``max_step`` is measured in units of the mode's own time, so it is divided
    by the trajectory's energy scale.

    :param trajectory: the mode's Hamiltonian path.
    :param max_step: step cap away from the crossing.
    :returns: consecutive segments covering [0, duration].
    """
    step = max_step / trajectory.energy_scale
    duration = trajectory.duration
    sin_k = math.sin(trajectory.k)
    cos_k = math.cos(trajectory.k)

    def time_at(g: float) -> float:
        return min(max((g - trajectory.g_start) / trajectory.ramp_rate, 0.0), duration)

    enter = time_at(cos_k - CROSSING_HALF_WIDTH * sin_k)
    leave = time_at(cos_k + CROSSING_HALF_WIDTH * sin_k)
    crossing_step = min(step, (leave - enter) / CROSSING_STEPS) if leave > enter else step
    segments = [
        Segment(0.0, enter, step),
        Segment(enter, leave, crossing_step),
        Segment(leave, duration, step),
    ]
    return [segment for segment in segments if segment.stop > segment.start]


def magnus_chunks(segment: Segment) -> Iterator[Tuple[FloatArray, float]]:
    """
    Left ends of the equal steps of a segment, a chunk at a time.

    :param segment: the segment to step through.
    :yields: (left end times, step length).
    """
    count = segment.step_count
    h = (segment.stop - segment.start) / count
    for first in range(0, count, CHUNK_STEPS):
        indices = np.arange(first, min(first + CHUNK_STEPS, count), dtype=np.float64)
        yield segment.start + h * indices, h


def ordered_product(factors: MatrixStack) -> MatrixStack:
    """
    Time-ordered product of a stack of matrices, later factors on the left.

    Pairs of neighbours are multiplied together until one matrix is left.

    :param factors: array of shape (steps, d, d), earliest first.
    :returns: factors[-1] @ ... @ factors[0].
    """
    product = factors
    size = factors.shape[-1]
    while product.shape[0] > 1:
        if product.shape[0] % 2:
            identity = np.eye(size, dtype=product.dtype)[np.newaxis]
            product = np.concatenate([product, identity])
        product = product[1::2] @ product[0::2]
    return product[0]


def checked_probability(p: float, k: float, quench_time: float) -> float:
    """
    Clamp rounding out of [0, 1]; anything further out is an error.

    :param p: computed probability.
    :param k: momentum, for diagnostics.
    :param quench_time: A, for diagnostics.
    :returns: p clamped to [0, 1].
    :raises NumericalError: p lies outside [-1e-9, 1 + 1e-9].
    """
    if not (math.isfinite(p) and -PROBABILITY_SLACK <= p <= 1.0 + PROBABILITY_SLACK):
        raise NumericalError(
            f"Excitation probability {p!r} outside [0, 1]",
            k=k,
            quench_time=quench_time,
        )
    return min(max(p, 0.0), 1.0)

"""Kink counting on the sigma_z basis of a periodic chain."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from kinkpairs.counting import KinkDistribution
from kinkpairs.exceptions import NumericalError

from .chain import SpinState, _check_size

IntArray = npt.NDArray[np.int64]


@dataclass(frozen=True, eq=False)
class KinkSpectrumTable:
    """Number of domain walls of every basis state of an N-spin ring."""

    n_spins: int
    walls: IntArray = field(repr=False)

    @classmethod
    def build(cls, n_spins: int) -> "KinkSpectrumTable":
        """
        Count the domain walls of every basis state.

        :param n_spins: chain length.
        :returns: the table.
        """
        return _table(n_spins)

    @property
    def pair_counts(self) -> IntArray:
        """
        Kink pairs per basis state; walls on a ring always pair up.

        :returns: walls // 2.
        """
        return self.walls // 2


@lru_cache(maxsize=None)
def _table(n_spins: int) -> KinkSpectrumTable:
    _check_size(n_spins)
    basis = np.arange(1 << n_spins, dtype=np.int64)
    rotated = ((basis << 1) | (basis >> (n_spins - 1))) & ((1 << n_spins) - 1)
    differing = basis ^ rotated
    walls = np.zeros_like(basis)
    for m in range(n_spins):
        walls += (differing >> m) & 1
    if np.any(walls % 2):
        raise NumericalError("Found an odd number of domain walls on a ring")
    walls.setflags(write=False)
    return KinkSpectrumTable(n_spins, walls)


def kink_pair_distribution(state: SpinState) -> KinkDistribution:
    """
    Distribution of the kink-pair number in a chain state.

    :param state: the state.
    :returns: P(n) for n = 0..N/2 with cumulants from its moments.
    """
    table = KinkSpectrumTable.build(state.n_spins)
    weights = np.abs(state.amplitudes) ** 2
    pmf = np.bincount(
        table.pair_counts, weights=weights, minlength=state.n_spins // 2 + 1,
    )
    return KinkDistribution.from_pmf(pmf)

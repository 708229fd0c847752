from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..sequences.vector import SeqVector
from ..torus.automorphism import ToralAutomorphism
from ..torus.periodic import PeriodicOrbit, periodic_points
from ..util.pytorch import points_tensor
from .cocycle import Cocycle, orbit_sum

# Largest number of fixed points of A^n that is enumerated by default.
DEFAULT_ENUMERATION_BUDGET = 1_000_000


class EnumerationBudgetError(ValueError):
    """
    Raised when enumerating the periodic points of some power would exceed
    the enumeration budget.
    """

    def __init__(self, n: int, count: int, budget: int):
        super().__init__(
            f"A^{n} has {count} fixed points, which exceeds the enumeration budget of {budget}"
        )
        self.n = n
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class PeriodicDataEntry:
    """
    A periodic orbit with its weight.

    :param orbit:
        The periodic orbit.
    :param weight:
        Sum of the cocycle over one minimal period of the orbit.
    """

    orbit: PeriodicOrbit
    weight: SeqVector


@dataclass(frozen=True)
class PeriodicData:
    """
    Periodic data ``P_f`` of a cocycle restricted to orbits of bounded
    minimal period.

    :param entries:
        One entry per distinct periodic orbit, ordered by minimal period and
        base point.
    :param n_max:
        Largest minimal period that was enumerated.
    """

    entries: Tuple[PeriodicDataEntry, ...]
    n_max: int

    def __len__(self) -> int:
        return len(self.entries)

    def weights(self, level: int) -> List[Tuple[float, ...]]:
        """
        Weight vectors truncated (or zero-padded) to ``level`` coordinates,
        suitable as input for separation decisions.
        """
        if level < 1:
            raise ValueError(f"Weight level must be positive, was: {level}")
        return [entry.weight.padded(level) for entry in self.entries]

    def exact_weights(self, level: int) -> List[Tuple[Fraction, ...]]:
        """
        Weight vectors as exact rationals (floats are converted without
        rounding).
        """
        return [tuple(Fraction(c) for c in w) for w in self.weights(level)]

    @property
    def support(self) -> int:
        return max((entry.weight.support for entry in self.entries), default=0)


def orbit_weight(f: Cocycle, orbit: PeriodicOrbit) -> SeqVector:
    """
    Weight of an orbit: the cocycle summed over the exact orbit points.
    """
    points = points_tensor([p.to_float().coords for p in orbit.points], f.dim)
    return orbit_sum(f, points)


def enumerate_orbits(
    automorphism: ToralAutomorphism,
    n_max: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> List[PeriodicOrbit]:
    """
    All periodic orbits with minimal period at most ``n_max``, each listed
    once.

    :param automorphism:
        The base map.
    :param n_max:
        Largest minimal period.
    :param budget:
        Maximum number of fixed points of any single power ``A^n``.
    :returns:
        Orbits ordered by minimal period and base point.
    :raises EnumerationBudgetError:
        When some ``|det(A^n - I)|`` exceeds the budget.
    """
    if n_max < 1:
        raise ValueError(f"Maximum period must be at least 1, was: {n_max}")
    for n in range(1, n_max + 1):
        count = abs(automorphism.periodic_determinant(n))
        if count > budget:
            raise EnumerationBudgetError(n, count, budget)

    orbits: List[PeriodicOrbit] = []
    for n in range(1, n_max + 1):
        orbits.extend(o for o in periodic_points(automorphism, n) if o.period == n)
    return orbits


def periodic_data(
    f: Cocycle,
    automorphism: ToralAutomorphism,
    n_max: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> PeriodicData:
    """
    Compute the periodic data of a cocycle: one weight per periodic orbit
    of minimal period at most ``n_max``.

    :param f:
        The cocycle.
    :param automorphism:
        The base map.
    :param n_max:
        Largest minimal period.
    :param budget:
        Enumeration budget, see :func:`enumerate_orbits`.
    :returns:
        The periodic data.
    """
    if f.dim != automorphism.dim:
        raise ValueError(
            f"Cocycle has base dimension {f.dim}, but the automorphism acts on dimension {automorphism.dim}"
        )
    orbits = enumerate_orbits(automorphism, n_max, budget)
    return PeriodicData(
        entries=tuple(PeriodicDataEntry(o, orbit_weight(f, o)) for o in orbits),
        n_max=n_max,
    )


def select_orbits(orbits: Sequence[PeriodicOrbit], count: int) -> List[PeriodicOrbit]:
    """
    The first ``count`` orbits by minimal period, ties broken by the
    lexicographic order of the base points.
    """
    ordered = sorted(orbits, key=lambda o: (o.period, o.base.sort_key()))
    return ordered[:count]

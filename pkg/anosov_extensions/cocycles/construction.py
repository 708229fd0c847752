import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from ..torus.automorphism import ToralAutomorphism
from ..torus.periodic import PeriodicOrbit
from ..torus.points import RationalTorusPoint, exact_torus_distance_squared
from .cocycle import Cocycle
from .functions import Bump, BumpSum
from .periodic_data import DEFAULT_ENUMERATION_BUDGET, enumerate_orbits, select_orbits

logger = logging.getLogger(__name__)

# Default largest minimal period searched for orbits to put bumps on.
DEFAULT_ORBIT_BUDGET = 8

# Bumps must not wrap around the torus.
MAX_BUMP_RADIUS = 0.25


class ConstructionError(ValueError):
    """
    Raised when an inseparable cocycle cannot be constructed from the
    available periodic orbits.
    """


@dataclass(frozen=True)
class ConstructionStep:
    """
    Log entry for one coordinate of the construction.

    :param level:
        Coordinate ``k`` (one-based).
    :param amplitude:
        Amplitude magnitude before division by the orbit period.
    :param lipschitz_constant:
        Certified Lipschitz constant of the coordinate function.
    :param positive_orbits:
        Number of pool orbits that get a positive weight.
    :param negative_orbits:
        Number of pool orbits that get a negative weight.
    """

    level: int
    amplitude: float
    lipschitz_constant: float
    positive_orbits: int
    negative_orbits: int


@dataclass(frozen=True)
class ConstructionResult:
    """
    Result of :func:`construct_inseparable`.

    :param cocycle:
        The constructed cocycle.
    :param orbits:
        The ``2^N`` orbits carrying bumps. Orbit ``j`` has the sign
        ``(-1)^{bit k-1 of j}`` in coordinate ``k``.
    :param radius:
        Common bump radius.
    :param steps:
        One log entry per coordinate.
    """

    cocycle: Cocycle
    orbits: Tuple[PeriodicOrbit, ...]
    radius: float
    steps: Tuple[ConstructionStep, ...]

    @property
    def levels(self) -> int:
        return len(self.steps)

    def orbit_signs(self, j: int) -> Tuple[int, ...]:
        """
        Signs of the weight of pool orbit ``j`` in coordinates ``1..N``.
        """
        return tuple(-1 if (j >> k) & 1 else 1 for k in range(self.levels))


def construct_inseparable(
    automorphism: ToralAutomorphism,
    levels: int,
    n_max: int = DEFAULT_ORBIT_BUDGET,
    *,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> ConstructionResult:
    """
    Construct a Lipschitz cocycle whose periodic data at every level
    ``k <= levels`` has a point in the interior of each orthant of ``R^k``,
    so that every truncation (and the cocycle itself) is inseparable.

    A pool of ``2^N`` periodic orbits is chosen by increasing minimal
    period. Every coordinate ``k`` is a sum of tent bumps, one at each
    point of each pool orbit. Pool orbit ``j`` gets the sign
    ``(-1)^{bit k-1 of j}`` in coordinate ``k``, so the level-``k`` weights
    of the pool realize all ``2^k`` sign patterns. Coordinate ``k`` carries
    bumps on all ``2^N`` pool orbits, not only on ``2^k`` of them, so the
    level-``k`` data has ``2^{N-k}`` orbits in every orthant. Bump amplitudes are
    ``min(2^{-(k-1)} r / 2, 1) / period``, which makes the weight of every
    pool orbit nonzero and bounds the Lipschitz constant of coordinate
    ``k`` by ``2^{-(k-1)}``.

    :param automorphism:
        The base map.
    :param levels:
        Number of coordinates ``N``, at least one.
    :param n_max:
        Largest minimal period of the orbits that may be used.
    :param budget:
        Enumeration budget for the periodic points of each power.
    :returns:
        The cocycle with the construction log.
    :raises ConstructionError:
        When fewer than ``2^N`` orbits have minimal period at most
        ``n_max`` or when the bump supports cannot be made disjoint.
    """
    if levels < 1:
        raise ValueError(f"Number of levels must be at least 1, was: {levels}")

    needed = 2**levels
    available = enumerate_orbits(automorphism, n_max, budget)
    if len(available) < needed:
        raise ConstructionError(
            f"Construction with {levels} levels needs {needed} periodic orbits, "
            f"but only {len(available)} have minimal period <= {n_max}"
        )
    pool = select_orbits(available, needed)
    logger.info(
        "Selected %d orbits with minimal periods up to %d",
        needed,
        max(orbit.period for orbit in pool),
    )

    points = [p for orbit in pool for p in orbit.points]
    min_distance_squared = _min_distance_squared(points)
    if min_distance_squared == 0:
        raise ConstructionError("Selected orbits share a point, cannot place bumps")
    radius = min(math.sqrt(float(min_distance_squared)) / 3.0, MAX_BUMP_RADIUS)

    coordinates: List[BumpSum] = []
    steps: List[ConstructionStep] = []
    for k in range(1, levels + 1):
        amplitude = min(math.ldexp(radius / 2.0, -(k - 1)), 1.0)
        bumps = []
        negative = 0
        for j, orbit in enumerate(pool):
            sign = -1.0 if (j >> (k - 1)) & 1 else 1.0
            negative += sign < 0
            for point in orbit.points:
                bumps.append(
                    Bump(
                        center=point.to_float(),
                        radius=radius,
                        amplitude=sign * amplitude / orbit.period,
                        exact_center=point,
                    )
                )
        coordinate = BumpSum(tuple(bumps))
        if not coordinate.supports_disjoint:
            raise ConstructionError(
                f"Bump supports of radius {radius} overlap at level {k}"
            )
        lipschitz = coordinate.lipschitz_constant()
        assert lipschitz <= math.ldexp(1.0, -(k - 1)), (
            f"Coordinate {k} has Lipschitz constant {lipschitz}, "
            f"which exceeds {math.ldexp(1.0, -(k - 1))}"
        )
        logger.debug("Level %d: amplitude %g, Lipschitz %g", k, amplitude, lipschitz)
        coordinates.append(coordinate)
        steps.append(
            ConstructionStep(
                level=k,
                amplitude=amplitude,
                lipschitz_constant=lipschitz,
                positive_orbits=needed - negative,
                negative_orbits=negative,
            )
        )

    return ConstructionResult(
        cocycle=Cocycle(automorphism.dim, tuple(coordinates)),
        orbits=tuple(pool),
        radius=radius,
        steps=tuple(steps),
    )


def _min_distance_squared(points: List[RationalTorusPoint]) -> Fraction:
    fractions = [p.to_fractions() for p in points]
    assert len(fractions) >= 2, "Need at least two points for a pairwise distance"
    return min(
        exact_torus_distance_squared(a, b)
        for i, a in enumerate(fractions)
        for b in fractions[i + 1 :]
    )

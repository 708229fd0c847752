import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Set, Tuple

from ._integer import adjugate, column_hermite_diagonal, determinant, subtract_identity
from .automorphism import ToralAutomorphism, apply_exact
from .points import RationalTorusPoint


@dataclass(frozen=True)
class PeriodicOrbit:
    """
    A periodic orbit of a toral automorphism.

    :param base:
        Lexicographically smallest point of the orbit. This is the identity
        of the orbit.
    :param period:
        Minimal period.
    :param points:
        The orbit in iteration order, starting at ``base``.
    """

    base: RationalTorusPoint
    period: int
    points: Tuple[RationalTorusPoint, ...]

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"Period must be positive, was: {self.period}")
        if len(self.points) != self.period or self.points[0] != self.base:
            raise ValueError("Orbit points must start at the base and have period length")


def orbit_of(automorphism: ToralAutomorphism, x: RationalTorusPoint) -> PeriodicOrbit:
    """
    Compute the orbit of a periodic rational point by exact iteration.

    Every rational point is periodic under a toral automorphism since the
    automorphism permutes the finitely many points with a given denominator.

    :param automorphism:
        The automorphism ``A``.
    :param x:
        Rational point.
    :returns:
        The orbit, rotated so that it starts at its lexicographically
        smallest point.
    """
    points = [x]
    current = apply_exact(automorphism, x)
    while current != x:
        points.append(current)
        current = apply_exact(automorphism, current)
    start = min(range(len(points)), key=lambda i: points[i].sort_key())
    rotated = tuple(points[start:] + points[:start])
    return PeriodicOrbit(base=rotated[0], period=len(rotated), points=rotated)


def fixed_points_of_power(
    automorphism: ToralAutomorphism, n: int
) -> Iterator[RationalTorusPoint]:
    """
    Enumerate the points fixed by ``A^n`` by exact lattice arithmetic.

    With ``B = A^n - I`` the fixed points are ``B^{-1} m mod Z^d`` for
    ``m`` ranging over representatives of ``Z^d / B Z^d``. The
    representatives are read off the diagonal of a column Hermite form of
    ``B`` and ``B^{-1} = adj(B) / det(B)``, so all points share the
    denominator ``D = |det(B)|`` and exactly ``D`` points are produced.

    :param automorphism:
        The automorphism ``A``.
    :param n:
        Power, at least one.
    :returns:
        Iterator over the ``D`` fixed points with denominator ``D``.
    """
    det = automorphism.periodic_determinant(n)
    b = subtract_identity(automorphism.power(n))
    denominator = abs(det)
    sign = 1 if det > 0 else -1
    adj = adjugate(b)
    dim = automorphism.dim
    columns = [tuple(sign * adj[r][c] for r in range(dim)) for c in range(dim)]
    diagonal = column_hermite_diagonal(b)

    for m in itertools.product(*(range(h) for h in diagonal)):
        numerators = [0] * dim
        for coefficient, column in zip(m, columns):
            if coefficient:
                for r in range(dim):
                    numerators[r] += coefficient * column[r]
        yield RationalTorusPoint(tuple(c % denominator for c in numerators), denominator)


def periodic_points(automorphism: ToralAutomorphism, n: int) -> List[PeriodicOrbit]:
    """
    All points fixed by ``A^n``, grouped into orbits.

    :param automorphism:
        The automorphism ``A``.
    :param n:
        Power, at least one.
    :returns:
        Orbits sorted by minimal period and then by base point. Minimal
        periods divide ``n`` and the orbit sizes sum to ``|det(A^n - I)|``.
    :raises NonHyperbolicError:
        When ``det(A^n - I) = 0``.
    """
    seen: Set[Tuple[int, ...]] = set()
    orbits: List[PeriodicOrbit] = []
    for point in fixed_points_of_power(automorphism, n):
        if point.numerators in seen:
            continue
        orbit = orbit_of(automorphism, point)
        assert n % orbit.period == 0, f"Orbit period {orbit.period} does not divide {n}"
        seen.update(p.numerators for p in orbit.points)
        orbits.append(orbit)
    orbits.sort(key=lambda orbit: (orbit.period, orbit.base.sort_key()))
    return orbits


def count_points(orbits: List[PeriodicOrbit]) -> int:
    """
    Number of points in a list of orbits.
    """
    return sum(orbit.period for orbit in orbits)


def grid_periodic_points(
    automorphism: ToralAutomorphism, n: int
) -> List[RationalTorusPoint]:
    """
    Brute-force oracle: scan the ``(1/D) Z^d`` grid with ``D = |det(A^n - I)|``
    and keep the points fixed by ``A^n``. Only feasible for small ``D``.

    :param automorphism:
        The automorphism ``A``.
    :param n:
        Power, at least one.
    :returns:
        Fixed points in lexicographic order.
    """
    denominator = abs(automorphism.periodic_determinant(n))
    fixed = []
    for numerators in itertools.product(range(denominator), repeat=automorphism.dim):
        point = RationalTorusPoint(tuple(numerators), denominator)
        image = point
        for _ in range(n):
            image = apply_exact(automorphism, image)
        if image == point:
            fixed.append(point)
    return fixed


def minimal_period_counts(orbits: List[PeriodicOrbit]) -> Dict[int, int]:
    """
    Number of orbits per minimal period.
    """
    counts: Dict[int, int] = {}
    for orbit in orbits:
        counts[orbit.period] = counts.get(orbit.period, 0) + 1
    return dict(sorted(counts.items()))

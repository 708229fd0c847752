import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from torch import Tensor

from ..cocycles.cocycle import Cocycle
from ..torus._integer import adjugate, matvec, subtract_identity
from ..torus.automorphism import ToralAutomorphism
from ..torus.points import RationalTorusPoint, TorusPoint, exact_torus_distance_squared
from ..util.pytorch import points_tensor

logger = logging.getLogger(__name__)

# Largest shadowing ratio accepted by default.
DEFAULT_C_MAX = 10.0

ExactPointT = Tuple[Fraction, ...]


@dataclass(frozen=True)
class ClosingConstants:
    """
    Constants ``c`` and ``λ`` of the shadowing estimate
    ``d(A^i x, A^i p) <= c λ^{min(i, n - i)} ε``.

    :param c:
        Multiplicative constant, positive.
    :param lam:
        Contraction rate in ``(0, 1)``.
    """

    c: float
    lam: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"Closing constant c must be positive, was: {self.c}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"Contraction rate must lie in (0, 1), was: {self.lam}")

    def bound(self, i: int, n: int, eps: float) -> float:
        return self.c * self.lam ** min(i, n - i) * eps

    def weight_bound(self, lipschitz: float, eps: float) -> float:
        """
        Bound ``L c ε 2 / (1 - λ)`` on the summed cocycle differences along a
        shadowed orbit segment, for a cocycle with Lipschitz constant ``L``.
        """
        return lipschitz * self.c * eps * 2.0 / (1.0 - self.lam)


@dataclass(frozen=True)
class NearReturn:
    """
    A point whose orbit nearly returns after ``n`` steps.

    :param x:
        The point.
    :param n:
        Return time, at least one.
    :param eps:
        The return distance ``d(A^n x, x)``, computed exactly from ``x``.
    """

    x: TorusPoint
    n: int
    eps: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Return time must be at least 1, was: {self.n}")
        if self.eps < 0:
            raise ValueError(f"Return distance must be non-negative, was: {self.eps}")


@dataclass(frozen=True)
class ShadowingResult:
    """
    Outcome of :func:`verify_shadowing`.

    :param ratios:
        ``d(A^i x, A^i p) / (λ^{min(i, n-i)} ε)`` for ``i = 0..n``. Empty when
        ``ε = 0``.
    :param constants:
        The fitted constants: ``c`` is the largest ratio, ``λ`` the
        theoretical contraction rate. ``None`` when ``ε = 0`` or the orbits
        coincide.
    :param distances:
        ``d(A^i x, A^i p)`` for ``i = 0..n``.
    :param is_exact:
        Whether ``x`` returns exactly (``ε = 0``).
    :param violation:
        Whether the largest ratio exceeds ``c_max``.
    """

    ratios: Tuple[float, ...]
    constants: Optional[ClosingConstants]
    distances: Tuple[float, ...]
    is_exact: bool
    violation: bool

    @property
    def max_ratio(self) -> float:
        return max(self.ratios, default=0.0)


def exact_lift(x: TorusPoint) -> ExactPointT:
    """
    The canonical lift of ``x`` in ``[0, 1)^d`` as exact rationals. Floats
    are converted without rounding.
    """
    return tuple(Fraction(c) for c in x.coords)


def exact_orbit(
    automorphism: ToralAutomorphism, x: Sequence[Fraction], n: int
) -> List[ExactPointT]:
    """
    The points ``x, A x, ..., A^n x`` (mod 1), in exact arithmetic.
    """
    points = [tuple(Fraction(c) % 1 for c in x)]
    for _ in range(n):
        points.append(tuple(c % 1 for c in matvec(automorphism.matrix, points[-1])))
    return points


def exact_distance(x: Sequence[Fraction], y: Sequence[Fraction]) -> float:
    return math.sqrt(exact_torus_distance_squared(x, y))


def float_points(points: Sequence[Sequence[Fraction]], dim: int) -> Tensor:
    """
    Nearest floating-point torus points of exact points, as a batch.

    *Shape:* ``(len(points), dim)``
    """
    return points_tensor(
        [TorusPoint.from_coords([float(c) for c in p]).coords for p in points], dim
    )


def find_near_returns(
    automorphism: ToralAutomorphism, x: TorusPoint, eps: float, k: int
) -> List[NearReturn]:
    """
    Scan the orbit of ``x`` for near-returns. The orbit is computed exactly,
    so the reported distances do not suffer from the exponential growth of
    floating-point errors.

    :param automorphism:
        The base map.
    :param x:
        Starting point.
    :param eps:
        Distance threshold, positive.
    :param k:
        Largest return time, at least one.
    :returns:
        All ``n`` in ``1..k`` with ``d(A^n x, x) < eps``, sorted by ``n``.
    """
    if not eps > 0:
        raise ValueError(f"Near-return threshold must be positive, was: {eps}")
    if k < 1:
        raise ValueError(f"Largest return time must be at least 1, was: {k}")
    if x.dim != automorphism.dim:
        raise ValueError(
            f"Automorphism acts on dimension {automorphism.dim}, but the point has dimension {x.dim}"
        )
    threshold = Fraction(eps) ** 2
    orbit = exact_orbit(automorphism, exact_lift(x), k)
    returns = []
    for n in range(1, k + 1):
        distance_squared = exact_torus_distance_squared(orbit[n], orbit[0])
        if distance_squared < threshold:
            returns.append(NearReturn(x=x, n=n, eps=math.sqrt(distance_squared)))
    return returns


def near_return_at(automorphism: ToralAutomorphism, x: TorusPoint, n: int) -> NearReturn:
    """
    The near-return of ``x`` at time ``n``, with its exact return distance.
    """
    orbit = exact_orbit(automorphism, exact_lift(x), n)
    return NearReturn(x=x, n=n, eps=exact_distance(orbit[n], orbit[0]))


def close_orbit(automorphism: ToralAutomorphism, near: NearReturn) -> RationalTorusPoint:
    """
    The periodic point that shadows a near-return.

    With ``B = A^n - I`` and the lift ``x̂`` of ``x``, the point is
    ``p = B^{-1} m mod 1`` where ``m`` rounds ``B x̂`` to the nearest
    integer vector (half to even). Then ``A^n p ≡ p`` and
    ``x̂ - p = B^{-1} (B x̂ - m)``, so ``p`` is close to ``x`` when the
    return distance is small.

    :param automorphism:
        The base map.
    :param near:
        The near-return.
    :returns:
        The exact periodic point, with denominator ``|det(A^n - I)|``.
    :raises NonHyperbolicError:
        When ``det(A^n - I) = 0``.
    """
    n = near.n
    det = automorphism.periodic_determinant(n)
    b = subtract_identity(automorphism.power(n))
    displaced = matvec(b, exact_lift(near.x))

    m = []
    for k, value in enumerate(displaced):
        rounded = round(value)
        if abs(value - rounded) == Fraction(1, 2):
            logger.debug(
                "Rounding tie in component %d of (A^%d - I) x for x = %s", k, n, near.x.coords
            )
        m.append(rounded)

    denominator = abs(det)
    sign = 1 if det > 0 else -1
    numerators = tuple((sign * c) % denominator for c in matvec(adjugate(b), m))
    p = RationalTorusPoint(numerators, denominator)

    image = matvec(automorphism.power(n), p.numerators)
    if tuple(c % denominator for c in image) != p.numerators:
        raise AssertionError(f"Closed orbit point {p} is not fixed by A^{n}")
    return p


def verify_shadowing(
    automorphism: ToralAutomorphism,
    near: NearReturn,
    p: RationalTorusPoint,
    *,
    lam: Optional[float] = None,
    c_max: float = DEFAULT_C_MAX,
) -> ShadowingResult:
    """
    Check the shadowing estimate ``d(A^i x, A^i p) <= c λ^{min(i, n-i)} ε``
    for ``i = 0..n`` and fit ``c``.

    :param automorphism:
        The base map.
    :param near:
        The near-return ``(x, n, ε)``.
    :param p:
        Periodic point from :func:`close_orbit`.
    :param lam:
        Contraction rate, defaults to the theoretical rate of the map.
    :param c_max:
        Ratios above this value are reported as a violation.
    :returns:
        Ratios, distances and the fitted constants.
    """
    if lam is None:
        lam = automorphism.contraction_rate()
    n, eps = near.n, near.eps
    x_orbit = exact_orbit(automorphism, exact_lift(near.x), n)
    p_orbit = exact_orbit(automorphism, p.to_fractions(), n)
    distances = tuple(exact_distance(a, b) for a, b in zip(x_orbit, p_orbit))

    if eps == 0:
        return ShadowingResult(
            ratios=(),
            constants=None,
            distances=distances,
            is_exact=True,
            violation=False,
        )

    ratios = tuple(d / (lam ** min(i, n - i) * eps) for i, d in enumerate(distances))
    c = max(ratios)
    return ShadowingResult(
        ratios=ratios,
        constants=ClosingConstants(c=c, lam=lam) if c > 0 else None,
        distances=distances,
        is_exact=False,
        violation=c > c_max,
    )


def weight_closeness(
    f: Cocycle,
    automorphism: ToralAutomorphism,
    x: TorusPoint,
    p: RationalTorusPoint,
    n: int,
) -> float:
    """
    Sum ``Σ_{i<n} |f(A^i x) - f(A^i p)|`` of Euclidean distances between
    cocycle values along the orbits of ``x`` and ``p``. Both orbits are
    computed exactly and only the cocycle is evaluated in floating point.

    :param f:
        The cocycle.
    :param automorphism:
        The base map.
    :param x:
        Near-returning point.
    :param p:
        Shadowing periodic point.
    :param n:
        Orbit segment length.
    :returns:
        The summed distance.
    """
    if n < 1:
        raise ValueError(f"Orbit segment length must be at least 1, was: {n}")
    x_orbit = exact_orbit(automorphism, exact_lift(x), n - 1)
    p_orbit = exact_orbit(automorphism, p.to_fractions(), n - 1)
    fx = f.evaluate_batch(float_points(x_orbit, f.dim))
    fp = f.evaluate_batch(float_points(p_orbit, f.dim))
    return float((fx - fp).square().sum(-1).sqrt().sum())

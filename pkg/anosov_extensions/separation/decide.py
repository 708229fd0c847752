import logging
from fractions import Fraction
from numbers import Real
from typing import List, Optional, Sequence, Tuple

from .certificate import Method, SeparationCertificate, VerificationError, Verdict
from .orthant import orthant_coverage
from .rational import PointT, rank_and_kernel, rationalize_points
from .simplex import LPStatus, maximize

logger = logging.getLogger(__name__)


def separating_functional(
    points: Sequence[Sequence[Real]],
) -> Optional[Tuple[Fraction, ...]]:
    """
    Find a nonzero rational ``v`` with ``⟨v, p⟩ >= 0`` for all points.

    :param points:
        Non-empty list of points of equal dimension.
    :returns:
        The functional coefficients, or ``None`` when the points are
        inseparable.
    """
    certificate = _solve(rationalize_points(points))
    return certificate.functional if certificate.is_separable else None


def decide(points: Sequence[Sequence[Real]]) -> SeparationCertificate:
    """
    Decide whether the points lie in a closed half-space through the
    origin, with an exactly verified certificate.

    An orthant cover is tried first since it is cheap. Otherwise the
    decision is made by exact rank computation and linear programming.

    :param points:
        Non-empty list of points of equal dimension; floats are converted
        to rationals without rounding.
    :returns:
        The verified certificate.
    :raises VerificationError:
        When the certificate does not survive exact re-verification.
    """
    exact = rationalize_points(points)
    cover = orthant_coverage(exact)
    if cover.covered:
        certificate = SeparationCertificate(
            verdict=Verdict.INSEPARABLE,
            method=Method.ORTHANT_COVER,
            dim=cover.dim,
            cover=dict(cover.cover),
        )
    else:
        certificate = _solve(exact)

    if not certificate.verify(exact):
        raise VerificationError(
            f"{certificate.method.value} certificate failed exact verification"
        )
    logger.debug(
        "%d points in dimension %d are %s (%s)",
        len(exact),
        certificate.dim,
        certificate.verdict.value,
        certificate.method.value,
    )
    return certificate


def _solve(points: List[PointT]) -> SeparationCertificate:
    dim = len(points[0])
    rank, kernel = rank_and_kernel(points)
    if kernel is not None:
        return SeparationCertificate(
            verdict=Verdict.SEPARABLE, method=Method.RANK, dim=dim, functional=kernel
        )

    functional = _strict_functional(points)
    if functional is not None:
        return SeparationCertificate(
            verdict=Verdict.SEPARABLE,
            method=Method.LP_FUNCTIONAL,
            dim=dim,
            functional=functional,
            strict=True,
        )

    multipliers = _positive_combination(points)
    if multipliers is not None:
        return SeparationCertificate(
            verdict=Verdict.INSEPARABLE,
            method=Method.POSITIVE_COMBINATION,
            dim=dim,
            multipliers=multipliers,
        )

    return SeparationCertificate(
        verdict=Verdict.SEPARABLE,
        method=Method.LP_FUNCTIONAL,
        dim=dim,
        functional=_weak_functional(points),
    )


def _strict_functional(points: List[PointT]) -> Optional[Tuple[Fraction, ...]]:
    """
    Maximize ``t`` subject to ``⟨v, p_i⟩ >= t`` and ``-1 <= v_j <= 1``.
    Variables are ``v⁺, v⁻, t >= 0`` with ``v = v⁺ - v⁻``.
    """
    dim = len(points[0])
    width = 2 * dim + 1
    a_ub = []
    for p in points:
        a_ub.append([-c for c in p] + list(p) + [Fraction(1)])
    for j in range(2 * dim):
        row = [Fraction(0)] * width
        row[j] = Fraction(1)
        a_ub.append(row)
    b_ub = [Fraction(0)] * len(points) + [Fraction(1)] * (2 * dim)
    c = [Fraction(0)] * (2 * dim) + [Fraction(1)]

    result = maximize(c, a_ub, b_ub)
    assert result.status == LPStatus.OPTIMAL and result.x is not None, (
        f"Bounded separation LP returned status {result.status.value}"
    )
    assert result.value is not None
    if result.value <= 0:
        return None
    return tuple(result.x[j] - result.x[dim + j] for j in range(dim))


def _positive_combination(points: List[PointT]) -> Optional[Tuple[Fraction, ...]]:
    """
    Find ``λ > 0`` with ``Σ λ_i p_i = 0`` by solving for ``μ = λ - 1 >= 0``
    in ``Σ μ_i p_i = -Σ p_i``.
    """
    dim = len(points[0])
    a_eq = [[p[k] for p in points] for k in range(dim)]
    b_eq = [-sum((p[k] for p in points), Fraction(0)) for k in range(dim)]
    result = maximize([Fraction(0)] * len(points), a_eq=a_eq, b_eq=b_eq)
    if result.status != LPStatus.OPTIMAL:
        return None
    assert result.x is not None
    return tuple(mu + 1 for mu in result.x)


def _weak_functional(points: List[PointT]) -> Tuple[Fraction, ...]:
    """
    Find ``v`` with ``⟨v, p_i⟩ >= 0`` and ``Σ_i ⟨v, p_i⟩ = 1``. Such a ``v``
    exists when no strictly positive combination of the points vanishes.
    """
    dim = len(points[0])
    a_ub = [[-c for c in p] + list(p) for p in points]
    b_ub = [Fraction(0)] * len(points)
    total = [sum((p[k] for p in points), Fraction(0)) for k in range(dim)]
    a_eq = [total + [-c for c in total]]
    result = maximize([Fraction(0)] * (2 * dim), a_ub, b_ub, a_eq, [Fraction(1)])
    assert result.status == LPStatus.OPTIMAL and result.x is not None, (
        "Points without a positive vanishing combination must be separable"
    )
    return tuple(result.x[j] - result.x[dim + j] for j in range(dim))

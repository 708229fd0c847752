import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Dict, Optional, Sequence, Tuple

from .rational import inner, rationalize, rationalize_points

logger = logging.getLogger(__name__)

SignsT = Tuple[int, ...]


@dataclass(frozen=True)
class OrthantCover:
    """
    Result of an orthant coverage test.

    :param dim:
        Dimension ``n`` of the points.
    :param cover:
        For every open orthant (identified by its sign pattern of ``±1``)
        that contains a point, the index of the first such point.
    :param zero_component_points:
        Indices of points with a zero component. They lie in no open
        orthant.
    """

    dim: int
    cover: Dict[SignsT, int]
    zero_component_points: Tuple[int, ...]

    @property
    def covered(self) -> bool:
        """
        Whether all ``2^n`` orthants contain a point, which makes the point
        set inseparable.
        """
        return len(self.cover) == 2**self.dim

    @property
    def missing(self) -> Tuple[SignsT, ...]:
        return tuple(s for s in all_sign_patterns(self.dim) if s not in self.cover)

    def __bool__(self) -> bool:
        return self.covered


def all_sign_patterns(dim: int) -> Tuple[SignsT, ...]:
    return tuple(itertools.product((1, -1), repeat=dim))


def sign_pattern(point: Sequence[Fraction], margin: Fraction = Fraction(0)) -> Optional[SignsT]:
    """
    Sign pattern of the open orthant containing ``point``, ``None`` when a
    component is zero (or within ``margin`` of zero).
    """
    signs = []
    for c in point:
        if c > margin:
            signs.append(1)
        elif c < -margin:
            signs.append(-1)
        else:
            return None
    return tuple(signs)


def orthant_coverage(points: Sequence[Sequence[Real]], margin: Real = 0) -> OrthantCover:
    """
    Test whether every open orthant of ``R^n`` contains one of the points.
    Such a point set is not contained in any closed half-space through the
    origin, i.e. it is inseparable.

    Signs are tested exactly on the rationalized points. A point with a
    zero component belongs to no open orthant; this is logged, never
    treated as a sign.

    :param points:
        Non-empty list of points of dimension ``n >= 1``.
    :param margin:
        Components must exceed this value in absolute value to count as
        signed. Use a positive margin for floating-point data whose small
        components are not trusted.
    :returns:
        The cover.
    """
    exact = rationalize_points(points)
    margin = rationalize(margin)
    if margin < 0:
        raise ValueError(f"Strictness margin must be non-negative, was: {margin}")
    cover: Dict[SignsT, int] = {}
    zero = []
    for i, point in enumerate(exact):
        signs = sign_pattern(point, margin)
        if signs is None:
            zero.append(i)
            continue
        cover.setdefault(signs, i)
    if zero:
        logger.debug(
            "%d of %d points have a zero component and cover no orthant",
            len(zero),
            len(exact),
        )
    return OrthantCover(dim=len(exact[0]), cover=cover, zero_component_points=tuple(zero))


def opposing_points(
    points: Sequence[Sequence[Real]], cover: OrthantCover, v: Sequence[Real]
) -> Tuple[int, int]:
    """
    Given a complete orthant cover and a nonzero functional ``v``, find
    points on both strict sides of the hyperplane ``⟨v, ·⟩ = 0``.

    The point in the orthant whose signs match those of ``v`` (zero
    components of ``v`` taken as positive) has a positive inner product and
    the point in the opposite orthant a negative one.

    :param points:
        The covered points.
    :param cover:
        A complete cover of the points.
    :param v:
        Nonzero functional coefficients.
    :returns:
        Indices ``(i, j)`` with ``⟨v, p_i⟩ > 0 > ⟨v, p_j⟩``.
    """
    if not cover.covered:
        raise ValueError(f"Orthant cover is incomplete, missing: {list(cover.missing)}")
    exact_v = tuple(rationalize(c) for c in v)
    if len(exact_v) != cover.dim:
        raise ValueError(
            f"Functional has {len(exact_v)} coefficients, but points have dimension {cover.dim}"
        )
    if all(c == 0 for c in exact_v):
        raise ValueError("Functional must be nonzero")
    matching = tuple(-1 if c < 0 else 1 for c in exact_v)
    opposite = tuple(-s for s in matching)
    i, j = cover.cover[matching], cover.cover[opposite]
    exact = rationalize_points(points)
    assert inner(exact_v, exact[i]) > 0 > inner(exact_v, exact[j]), (
        "Orthant cover points are not strictly signed"
    )
    return i, j

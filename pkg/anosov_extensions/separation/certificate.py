from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import Any, Dict, Optional, Sequence, Tuple

from ..sequences.functional import LinearFunctional
from ..util.serde import fraction_from_str, fraction_to_str
from .orthant import SignsT, all_sign_patterns, sign_pattern
from .rational import inner, rank_and_kernel, rationalize_points


class Verdict(Enum):
    SEPARABLE = "separable"
    INSEPARABLE = "inseparable"


class Method(Enum):
    """
    How a separation certificate was obtained.
    """

    #: The points span a proper subspace, a kernel vector separates them.
    RANK = "rank"

    #: Exact LP found a functional, strictly positive or not.
    LP_FUNCTIONAL = "lp-functional"

    #: Every open orthant contains a point.
    ORTHANT_COVER = "orthant-cover"

    #: The points have full rank and a strictly positive linear
    #: combination vanishes.
    POSITIVE_COMBINATION = "positive-combination"


class VerificationError(RuntimeError):
    """
    Raised when a certificate fails its exact re-verification.
    """


@dataclass(frozen=True)
class SeparationCertificate:
    """
    Exact certificate for the separability verdict of a finite point set.

    :param verdict:
        Whether the points lie in a closed half-space through the origin.
    :param method:
        How the certificate was found.
    :param dim:
        Dimension of the points.
    :param functional:
        For separable verdicts, nonzero ``v`` with ``⟨v, p⟩ >= 0`` for all
        points.
    :param strict:
        For separable verdicts, whether all inner products are positive.
    :param cover:
        For orthant covers, one point index per sign pattern.
    :param multipliers:
        For positive combinations, ``λ > 0`` with ``Σ λ_i p_i = 0``.
    """

    verdict: Verdict
    method: Method
    dim: int
    functional: Optional[Tuple[Fraction, ...]] = None
    strict: bool = False
    cover: Optional[Dict[SignsT, int]] = None
    multipliers: Optional[Tuple[Fraction, ...]] = None

    @property
    def is_separable(self) -> bool:
        return self.verdict == Verdict.SEPARABLE

    def as_functional(self) -> LinearFunctional:
        """
        The separating functional on ``R^ω``.
        """
        if self.functional is None:
            raise ValueError("Inseparable certificates carry no functional")
        return LinearFunctional(len(self.functional), self.functional)

    def verify(self, points: Sequence[Sequence[Real]]) -> bool:
        """
        Re-check the certificate against the points in exact arithmetic.
        """
        exact = rationalize_points(points)
        if len(exact[0]) != self.dim:
            return False

        if self.verdict == Verdict.SEPARABLE:
            v = self.functional
            if v is None or len(v) != self.dim or all(c == 0 for c in v):
                return False
            products = [inner(v, p) for p in exact]
            if self.strict:
                return all(ip > 0 for ip in products)
            return all(ip >= 0 for ip in products)

        if self.method == Method.ORTHANT_COVER:
            if self.cover is None:
                return False
            for signs in all_sign_patterns(self.dim):
                i = self.cover.get(signs)
                if i is None or not 0 <= i < len(exact):
                    return False
                if sign_pattern(exact[i]) != signs:
                    return False
            return True

        if self.method == Method.POSITIVE_COMBINATION:
            lam = self.multipliers
            if lam is None or len(lam) != len(exact) or any(c <= 0 for c in lam):
                return False
            for k in range(self.dim):
                if sum((l * p[k] for l, p in zip(lam, exact)), Fraction(0)) != 0:
                    return False
            rank, _ = rank_and_kernel(exact)
            return rank == self.dim

        return False

    def to_dict(self) -> Dict[str, Any]:
        """
        Serialize the certificate. Rationals become ``"num/den"`` strings and
        orthant covers map sign strings such as ``"+-"`` to point indices.
        """
        data: Dict[str, Any] = {
            "verdict": self.verdict.value,
            "method": self.method.value,
            "dim": self.dim,
        }
        if self.functional is not None:
            data["functional"] = [fraction_to_str(c) for c in self.functional]
            data["strict"] = self.strict
        if self.cover is not None:
            data["cover"] = {_signs_to_str(s): i for s, i in sorted(self.cover.items())}
        if self.multipliers is not None:
            data["multipliers"] = [fraction_to_str(c) for c in self.multipliers]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SeparationCertificate":
        functional = data.get("functional")
        cover = data.get("cover")
        multipliers = data.get("multipliers")
        return cls(
            verdict=Verdict(data["verdict"]),
            method=Method(data["method"]),
            dim=int(data["dim"]),
            functional=None
            if functional is None
            else tuple(fraction_from_str(c) for c in functional),
            strict=bool(data.get("strict", False)),
            cover=None
            if cover is None
            else {_signs_from_str(s): int(i) for s, i in cover.items()},
            multipliers=None
            if multipliers is None
            else tuple(fraction_from_str(c) for c in multipliers),
        )


def _signs_to_str(signs: SignsT) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def _signs_from_str(signs: str) -> SignsT:
    if not signs or any(c not in "+-" for c in signs):
        raise ValueError(f"Invalid orthant sign string: {signs!r}")
    return tuple(1 if c == "+" else -1 for c in signs)

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence, Tuple

from .vector import SeqVector


@dataclass(frozen=True)
class LinearFunctional:
    """
    Continuous linear functional on ``R^ω``. Every such functional factors
    through a truncation, ``L = A ∘ π_n``, so it is stored as the level
    ``n`` and the coefficients of ``A``.

    :param level:
        Truncation level ``n``.
    :param coefficients:
        ``n`` coefficients, not all zero.
    """

    level: int
    coefficients: Tuple[Real, ...]

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"Functional level must be positive, was: {self.level}")
        if len(self.coefficients) != self.level:
            raise ValueError(
                f"Expected {self.level} coefficients, but got {len(self.coefficients)}"
            )
        if all(c == 0 for c in self.coefficients):
            raise ValueError("A linear functional needs at least one nonzero coefficient")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @classmethod
    def basis(cls, i: int, level: int = 0) -> "LinearFunctional":
        """
        The coordinate functional ``e_i``.

        :param i:
            Coordinate (one-based).
        :param level:
            Level of the functional, defaults to ``i``.
        """
        level = max(level, i)
        return cls(
            level, tuple(Fraction(int(j == i)) for j in range(1, level + 1))
        )

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Real]) -> "LinearFunctional":
        """
        Construct a functional from its coefficients, with trailing zero
        coefficients removed from the level.
        """
        coefficients = list(coefficients)
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        return cls(len(coefficients), tuple(coefficients))


def functional_apply(functional: LinearFunctional, a: SeqVector) -> Real:
    """
    Evaluate ``L(a) = Σ_{i <= n} c_i a_i``. Exact when the coefficients and
    coordinates are exact.
    """
    return sum(
        (c * v for c, v in zip(functional.coefficients, a.padded(functional.level))),
        Fraction(0),
    )

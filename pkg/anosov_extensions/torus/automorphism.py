from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional, Sequence, Tuple

import torch
from torch import Tensor

from ..util.pytorch import DTYPE
from ._integer import (
    IntMatrixT,
    as_int_matrix,
    determinant,
    is_square,
    matpow,
    matvec,
    subtract_identity,
)
from .points import RationalTorusPoint, TorusPoint

# Eigenvalue moduli within this distance of one are considered neutral.
HYPERBOLICITY_TOL = 1e-9


class HyperbolicityFailure(Enum):
    """
    Reasons for rejecting a matrix as a hyperbolic toral automorphism.
    """

    #: The matrix is not square (or empty).
    NOT_SQUARE = "not-square"

    #: The determinant is not ``±1``.
    NOT_UNIMODULAR = "not-unimodular"

    #: An eigenvalue has modulus within the tolerance of one.
    UNIT_EIGENVALUE = "unit-eigenvalue"

    #: ``det(A^n - I) = 0`` for some requested ``n``.
    SINGULAR_POWER = "singular-power"


class NonHyperbolicError(ValueError):
    """
    Raised when a matrix does not define a hyperbolic toral automorphism.
    """

    def __init__(self, reason: HyperbolicityFailure, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class HyperbolicityReport:
    """
    Outcome of validating a matrix as a hyperbolic toral automorphism.

    :param accepted:
        Whether the matrix was accepted.
    :param reason:
        Rejection reason, ``None`` when accepted.
    :param message:
        Human-readable explanation.
    :param determinant:
        Exact determinant, ``None`` for non-square input.
    :param moduli:
        Eigenvalue moduli in decreasing order. Empty when the check
        stopped before computing eigenvalues.
    """

    accepted: bool
    reason: Optional[HyperbolicityFailure]
    message: str
    determinant: Optional[int] = None
    moduli: Tuple[float, ...] = field(default_factory=tuple)

    def raise_if_rejected(self):
        if not self.accepted:
            assert self.reason is not None
            raise NonHyperbolicError(self.reason, self.message)


def check_hyperbolic(
    matrix: Sequence[Sequence[int]], tol: float = HYPERBOLICITY_TOL
) -> HyperbolicityReport:
    """
    Validate a matrix as a hyperbolic automorphism of the torus.

    The determinant is checked exactly. Eigenvalues are only computed in
    floating point, since they are used for validation and never in exact
    code paths.

    :param matrix:
        Row-major integer matrix.
    :param tol:
        Eigenvalue moduli ``m`` with ``|m - 1| <= tol`` are rejected.
    :returns:
        The validation report.
    """
    if not is_square(matrix):
        return HyperbolicityReport(
            accepted=False,
            reason=HyperbolicityFailure.NOT_SQUARE,
            message=f"Matrix must be square and non-empty, got rows of lengths {[len(r) for r in matrix]}",
        )
    int_matrix = as_int_matrix(matrix)
    det = determinant(int_matrix)
    if abs(det) != 1:
        return HyperbolicityReport(
            accepted=False,
            reason=HyperbolicityFailure.NOT_UNIMODULAR,
            message=f"Matrix must have determinant ±1, but |det| = {abs(det)}",
            determinant=det,
        )

    moduli = eigenvalue_moduli(int_matrix)
    neutral = [m for m in moduli if abs(m - 1.0) <= tol]
    if neutral:
        return HyperbolicityReport(
            accepted=False,
            reason=HyperbolicityFailure.UNIT_EIGENVALUE,
            message=f"Matrix has eigenvalues on the unit circle (moduli: {list(moduli)})",
            determinant=det,
            moduli=moduli,
        )

    return HyperbolicityReport(
        accepted=True,
        reason=None,
        message="Matrix is a hyperbolic toral automorphism",
        determinant=det,
        moduli=moduli,
    )


def eigenvalue_moduli(matrix: IntMatrixT) -> Tuple[float, ...]:
    """
    Floating-point eigenvalue moduli of an integer matrix, decreasing.
    """
    eigenvalues = torch.linalg.eigvals(torch.tensor(matrix, dtype=DTYPE))
    moduli = eigenvalues.abs().tolist()
    return tuple(sorted(moduli, reverse=True))


@dataclass(frozen=True)
class ToralAutomorphism:
    """
    Hyperbolic automorphism of the ``d``-torus given by an integer matrix
    with determinant ``±1`` and no eigenvalue on the unit circle.

    Construct instances with :meth:`from_matrix`, which validates the matrix.

    :param matrix:
        Row-major exact integer matrix.
    """

    matrix: IntMatrixT

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_int_matrix(self.matrix))

    @classmethod
    def from_matrix(
        cls, matrix: Sequence[Sequence[int]], tol: float = HYPERBOLICITY_TOL
    ) -> "ToralAutomorphism":
        """
        Validate a matrix and construct the automorphism.

        :param matrix:
            Row-major integer matrix.
        :param tol:
            Hyperbolicity tolerance on eigenvalue moduli.
        :returns:
            The automorphism.
        :raises NonHyperbolicError:
            When the matrix is rejected by :func:`check_hyperbolic`.
        """
        check_hyperbolic(matrix, tol).raise_if_rejected()
        return cls(as_int_matrix(matrix))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @cached_property
    def float_matrix(self) -> Tensor:
        """
        The matrix as a ``float64`` tensor.

        *Shape:* ``(dim, dim)``
        """
        return torch.tensor(self.matrix, dtype=DTYPE)

    def power(self, n: int) -> IntMatrixT:
        """
        Exact matrix power ``A^n``.
        """
        return matpow(self.matrix, n)

    def periodic_determinant(self, n: int) -> int:
        """
        Exact ``det(A^n - I)``. Its absolute value is the number of points
        fixed by ``A^n``.

        :raises NonHyperbolicError:
            When the determinant vanishes.
        """
        if n < 1:
            raise ValueError(f"Period must be at least 1, was: {n}")
        det = determinant(subtract_identity(self.power(n)))
        if det == 0:
            raise NonHyperbolicError(
                HyperbolicityFailure.SINGULAR_POWER,
                f"det(A^{n} - I) = 0, the matrix is not hyperbolic",
            )
        return det

    def contraction_rate(self) -> float:
        """
        Theoretical contraction rate of the closing lemma: the maximum over
        eigenvalues ``μ`` of ``min(|μ|, 1/|μ|)``.
        """
        moduli = eigenvalue_moduli(self.matrix)
        return max(min(m, 1.0 / m) for m in moduli)


def apply(automorphism: ToralAutomorphism, x: TorusPoint) -> TorusPoint:
    """
    Apply the automorphism to a floating-point torus point.

    :param automorphism:
        The automorphism ``A``.
    :param x:
        Point to map.
    :returns:
        ``A x mod 1``.
    """
    _check_dim(automorphism, x.dim)
    image = apply_batch(automorphism.float_matrix, x.to_tensor())
    return TorusPoint(tuple(image[0].tolist()))


def apply_batch(matrix: Tensor, points: Tensor) -> Tensor:
    """
    Apply a float matrix to a batch of torus points, reducing modulo one.

    The products are accumulated column by column, so every row of the
    batch is computed with the same sequence of floating-point operations
    regardless of the batch size.

    :param matrix:
        Float matrix.

        *Shape:* ``(dim, dim)``
    :param points:
        Points with coordinates in ``[0, 1)``.

        *Shape:* ``(batch_size, dim)``
    :returns:
        Images with coordinates in ``[0, 1)``.

        *Shape:* ``(batch_size, dim)``
    """
    image = points[:, 0:1] * matrix[:, 0]
    for j in range(1, matrix.size(1)):
        image = image + points[:, j : j + 1] * matrix[:, j]
    image = torch.remainder(image, 1.0)
    # The remainder of a tiny negative value rounds up to 1.0.
    return torch.where(image >= 1.0, torch.zeros_like(image), image)


def apply_exact(
    automorphism: ToralAutomorphism, x: RationalTorusPoint
) -> RationalTorusPoint:
    """
    Apply the automorphism to an exact rational point. The denominator is
    preserved.

    :param automorphism:
        The automorphism ``A``.
    :param x:
        Rational point.
    :returns:
        ``A x mod 1`` with the same denominator as ``x``.
    """
    _check_dim(automorphism, x.dim)
    image = matvec(automorphism.matrix, x.numerators)
    return RationalTorusPoint(
        tuple(c % x.denominator for c in image), x.denominator
    )


def _check_dim(automorphism: ToralAutomorphism, dim: int):
    if automorphism.dim != dim:
        raise ValueError(
            f"Automorphism acts on dimension {automorphism.dim}, but the point has dimension {dim}"
        )

from typing import List, Sequence, Tuple

IntMatrixT = Tuple[Tuple[int, ...], ...]
IntVectorT = Tuple[int, ...]


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrixT:
    """
    Convert a row-major nested sequence to an immutable integer matrix.
    Non-integral entries (e.g. ``2.5``) are rejected, integral floats are
    accepted.
    """
    matrix = []
    for row in rows:
        converted = []
        for entry in row:
            if isinstance(entry, bool):
                raise ValueError(f"Matrix entries must be integers, but got: {entry!r}")
            if isinstance(entry, int):
                converted.append(entry)
            elif isinstance(entry, float) and entry.is_integer():
                converted.append(int(entry))
            else:
                raise ValueError(f"Matrix entries must be integers, but got: {entry!r}")
        matrix.append(tuple(converted))
    return tuple(matrix)


def is_square(matrix: Sequence[Sequence[int]]) -> bool:
    return len(matrix) > 0 and all(len(row) == len(matrix) for row in matrix)


def identity(dim: int) -> IntMatrixT:
    return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))


def matmul(a: IntMatrixT, b: IntMatrixT) -> IntMatrixT:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: IntMatrixT, v: Sequence[int]) -> IntVectorT:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def subtract_identity(a: IntMatrixT) -> IntMatrixT:
    return tuple(
        tuple(entry - int(i == j) for j, entry in enumerate(row))
        for i, row in enumerate(a)
    )


def matpow(a: IntMatrixT, n: int) -> IntMatrixT:
    """
    Exact matrix power by repeated squaring. Entries are Python integers,
    so there is no overflow however large the entries grow.
    """
    if n < 0:
        raise ValueError(f"Matrix power must be non-negative, was: {n}")
    result = identity(len(a))
    base = a
    while n:
        if n & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        n >>= 1
    return result


def determinant(a: IntMatrixT) -> int:
    """
    Exact determinant using fraction-free (Bareiss) elimination.
    """
    dim = len(a)
    m: List[List[int]] = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(dim - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, dim) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, dim):
            for j in range(k + 1, dim):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[dim - 1][dim - 1]


def adjugate(a: IntMatrixT) -> IntMatrixT:
    """
    Exact adjugate, so that ``adjugate(a) @ a == det(a) * I``.
    """
    dim = len(a)
    if dim == 1:
        return ((1,),)
    cofactors = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            minor = tuple(
                tuple(a[r][c] for c in range(dim) if c != j)
                for r in range(dim)
                if r != i
            )
            cofactors[i][j] = (-1) ** (i + j) * determinant(minor)
    # Transpose of the cofactor matrix.
    return tuple(tuple(cofactors[j][i] for j in range(dim)) for i in range(dim))


def column_hermite_diagonal(a: IntMatrixT) -> IntVectorT:
    """
    Diagonal of a lower-triangular column Hermite form ``H = a U`` with
    ``U`` unimodular. The lattice spanned by the columns of ``a`` equals
    the lattice spanned by the columns of ``H``, so integer vectors ``m``
    with ``0 <= m_i < H_ii`` form a complete set of coset representatives
    of ``Z^d / a Z^d``.

    :param a:
        Non-singular square integer matrix.
    :returns:
        Positive diagonal entries of ``H``. Their product is ``|det(a)|``.
    """
    dim = len(a)
    # Work on columns.
    cols: List[List[int]] = [[a[r][c] for r in range(dim)] for c in range(dim)]
    diagonal = []
    for i in range(dim):
        # Euclid on row i over columns i..dim-1 until only column i is nonzero.
        while True:
            nonzero = [c for c in range(i, dim) if cols[c][i] != 0]
            if not nonzero:
                raise ValueError("Matrix is singular, no Hermite form with positive diagonal")
            pivot = min(nonzero, key=lambda c: abs(cols[c][i]))
            cols[i], cols[pivot] = cols[pivot], cols[i]
            done = True
            for c in range(i + 1, dim):
                if cols[c][i] != 0:
                    q = cols[c][i] // cols[i][i]
                    cols[c] = [x - q * y for x, y in zip(cols[c], cols[i])]
                    if cols[c][i] != 0:
                        done = False
            if done:
                break
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
        diagonal.append(cols[i][i])
    return tuple(diagonal)

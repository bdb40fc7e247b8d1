"""Exact integer and rational linear algebra.

Matrices are tuples of tuples of Python ints, vectors are tuples of ints or
:class:`fractions.Fraction`.  Nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DimensionMismatch, NotSymmetric, SingularMatrix

IntMatrix = tuple[tuple[int, ...], ...]


def as_int_matrix(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Validate that ``M`` is a square matrix of integers and freeze it."""
    rows = tuple(tuple(row) for row in M)
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise DimensionMismatch(f"matrix is not square: row of length {len(row)} in {n}x{n}")
        for x in row:
            # bool is an int subclass but never a meaningful entry
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"matrix entry {x!r} is not an integer")
    return rows


def is_symmetric(M: Sequence[Sequence[int]]) -> bool:
    n = len(M)
    return all(M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n))


def _require_symmetric(M):
    if not is_symmetric(M):
        raise NotSymmetric("matrix is not symmetric")


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A, B) -> tuple:
    if A and len(A[0]) != len(B):
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x?")
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def matvec(A, v) -> tuple:
    if A and len(A[0]) != len(v):
        raise DimensionMismatch(f"matrix has {len(A[0])} columns, vector has length {len(v)}")
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def vecmat(v, A) -> tuple:
    """Row vector times matrix, ``v^t A``."""
    if len(v) != len(A):
        raise DimensionMismatch(f"vector has length {len(v)}, matrix has {len(A)} rows")
    if not A:
        return ()
    return tuple(sum(x * A[i][j] for i, x in enumerate(v)) for j in range(len(A[0])))


def principal_submatrix(M, indices: Sequence[int]) -> IntMatrix:
    return tuple(tuple(M[i][j] for j in indices) for i in indices)


def trace(M) -> int:
    return sum(M[i][i] for i in range(len(M)))


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination.

    Every intermediate quotient is exact, so the whole computation stays in
    the integers.  The empty matrix has determinant 1.
    """
    A = [list(row) for row in as_int_matrix(M)]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = A[k][k]
        for i in range(k + 1, n):
            row_i = A[i]
            a_ik = row_i[k]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - a_ik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * A[n - 1][n - 1] if n else 1


def leading_principal_minors(M: Sequence[Sequence[int]]) -> list[int]:
    """Return ``[det M_1, det M_2, ..., det M_n]`` for the leading blocks.

    One Bareiss sweep without pivoting yields every leading minor as a pivot.
    If a pivot vanishes the sweep cannot continue; the remaining minors are
    then computed directly.
    """
    A = [list(row) for row in as_int_matrix(M)]
    n = len(A)
    minors = []
    prev = 1
    for k in range(n):
        pivot = A[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend(det(principal_submatrix(M, range(m))) for m in range(k + 2, n + 1))
            return minors
        for i in range(k + 1, n):
            row_i = A[i]
            a_ik = row_i[k]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - a_ik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors


def extend_bareiss(columns: Sequence[Sequence[int]], border: Sequence[int], corner: int) -> list[int]:
    """Border a symmetric matrix by one row/column and continue its Bareiss sweep.

    ``columns[c]`` holds the final Bareiss values of rows ``0..c`` in column
    ``c`` (so ``columns[c][c]`` is the ``c+1``-th leading minor).  ``border``
    is the new column above the diagonal and ``corner`` the new diagonal
    entry.  Returns the new column; its last entry is the determinant of the
    bordered matrix.  Costs O(k^2) instead of a fresh O(k^3) sweep.  Requires
    every existing leading minor to be nonzero.
    """
    k = len(columns)
    if not any(border):
        # block diagonal: the sweep leaves zeros and scales the corner
        return [0] * k + [corner * columns[-1][-1] if k else corner]
    v: list[int] = []
    for i in range(k):
        x = border[i]
        prev = 1
        for s in range(i):
            p = columns[s][s]
            # by symmetry, row i's column-s entry before step s is columns[i][s]
            x = (x * p - columns[i][s] * v[s]) // prev
            prev = p
        v.append(x)
    x = corner
    prev = 1
    for s in range(k):
        p = columns[s][s]
        x = (x * p - v[s] * v[s]) // prev
        prev = p
    v.append(x)
    return v


def solve_many(S: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Solve ``S X = B`` for a matrix right-hand side ``B`` (given by rows)."""
    S = as_int_matrix(S)
    n = len(S)
    if len(B) != n:
        raise DimensionMismatch(f"right-hand side has {len(B)} rows, expected {n}")
    m = len(B[0]) if n else 0
    A = [[Fraction(x) for x in S[i]] + [Fraction(x) for x in B[i]] for i in range(n)]
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        A[k], A[p] = A[p], A[k]
        inv = 1 / A[k][k]
        row_k = [x * inv for x in A[k]]
        A[k] = row_k
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k]
                A[i] = [a - f * b for a, b in zip(A[i], row_k)]
    return [row[n:n + m] for row in A]


def solve(S: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[Fraction, ...]:
    """Unique exact solution of ``S x = b``.

    Raises :class:`SingularMatrix` when ``det(S) == 0``.
    """
    if len(b) != len(S):
        raise DimensionMismatch(f"vector has length {len(b)}, matrix has size {len(S)}")
    if not S:
        return ()
    X = solve_many(S, [[x] for x in b])
    return tuple(row[0] for row in X)


def adjugate(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Transpose of the cofactor matrix, so that ``M adj(M) = det(M) I``."""
    M = as_int_matrix(M)
    n = len(M)
    if n == 0:
        return ()
    if n == 1:
        return ((1,),)
    # fraction-free Gauss-Jordan on [M | I]: ends at [d' I | d' M^-1] with
    # d' = det of the row-permuted matrix, every division exact
    A = [list(M[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                break
            A[k], A[p] = A[p], A[k]
            sign = -sign
        pivot = A[k][k]
        row_k = A[k]
        for i in range(n):
            if i == k:
                continue
            row_i = A[i]
            a_ik = row_i[k]
            A[i] = [(pivot * x - a_ik * y) // prev for x, y in zip(row_i, row_k)]
        prev = pivot
    else:
        return tuple(tuple(sign * x for x in row[n:]) for row in A)
    # singular: fall back to explicit cofactors
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [M[r][c] for c in range(n) if c != i]
                for r in range(n) if r != j
            ]
            adj[i][j] = (-1) ** (i + j) * det(minor)
    return tuple(tuple(row) for row in adj)


def is_negative_definite(S: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion: ``(-1)^j det_j > 0`` for every leading minor."""
    S = as_int_matrix(S)
    _require_symmetric(S)
    for j, m in enumerate(leading_principal_minors(S), start=1):
        if m == 0 or (m > 0) != (j % 2 == 0):
            return False
    return True


def signature(G: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Inertia ``(n_plus, n_minus, n_zero)`` of a symmetric integer form.

    Uses fraction-free symmetric (congruence) reduction.  After pivoting on a
    nonzero diagonal entry ``p`` the trailing block is replaced by
    ``p * (Schur complement)``, which scales its signs by ``sign(p)``; that
    factor is tracked in ``flip``.  A zero diagonal with a nonzero
    off-diagonal entry is repaired by the congruence ``e_i -> e_i + e_j``.
    """
    G = as_int_matrix(G)
    _require_symmetric(G)
    A = [list(row) for row in G]
    pos = neg = 0
    flip = 1
    while A:
        n = len(A)
        k = next((i for i in range(n) if A[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i -> e_i + e_j makes the (i, i) entry 2 * A[i][j] != 0
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                A[r][i] += A[r][j]
            k = i
        p = A[k][k]
        if (p > 0) == (flip > 0):
            pos += 1
        else:
            neg += 1
        rest = [r for r in range(n) if r != k]
        B = [[p * A[r][c] - A[r][k] * A[k][c] for c in rest] for r in rest]
        g = 0
        for row in B:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            B = [[x // g for x in row] for row in B]
        if p < 0:
            flip = -flip
        A = B
    zero = len(G) - pos - neg
    return pos, neg, zero

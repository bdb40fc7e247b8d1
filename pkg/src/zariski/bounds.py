"""Quantitative bounds relating Zariski denominators and negativity.

``b`` is the negativity bound (largest ``-C^2`` over the registry), ``d`` a
bound on Zariski denominators.  The functions here compute

* the enumeration bound on ``d``: the largest ``|det|`` of a negative
  definite principal submatrix of the full curve intersection matrix;
* ``b ** (rho - 1)``, an upper bound on ``d`` given ``b``;
* ``d * d! * |disc|``, an upper bound on ``b`` given ``d``;

and the divisors ``A + kC`` whose decompositions realize the denominator
``-C^2 / gcd(C^2, A.C)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, floor, gcd
from typing import Sequence

from . import linalg
from .errors import EnumerationTooLarge, NotNegativeDefinite, ZariskiError, ZeroClass
from .surface import SurfaceModel

DEFAULT_MAX_SUBSETS = 2 ** 20


@dataclass(frozen=True)
class SurfaceBounds:
    b: int
    rho: int
    delta_abs: int
    d_enum: int
    d_theorem: int
    b_theorem: int

    @property
    def chain_holds(self) -> bool:
        return self.d_enum <= self.d_theorem and self.b <= self.b_theorem


@dataclass(frozen=True)
class PrimitiveDecomposition:
    F: tuple[int, ...]
    k: int


def negativity_bound(X: SurfaceModel) -> int:
    return max((-c.self_int for c in X.curves), default=0)


def amgm_det_bound(S: Sequence[Sequence[int]]) -> Fraction:
    """``(-tr S / k) ** k``, which bounds ``|det S|`` for negative definite ``S``.

    The eigenvalues are all negative, their sum is the trace and their
    product the determinant, so this is the arithmetic/geometric mean
    inequality on ``|lambda_i|``.  Only the trace is needed.
    """
    S = linalg.as_int_matrix(S)
    if not linalg.is_negative_definite(S):
        raise NotNegativeDefinite("matrix is not negative definite")
    k = len(S)
    return Fraction(-linalg.trace(S), k) ** k


def _naive_count(n, max_size):
    return sum(comb(n, s) for s in range(1, max_size + 1))


def negative_definite_submatrices(
    X: SurfaceModel,
    max_size: int | None = None,
    max_subsets: int | None = None,
):
    """Yield ``(indices, det)`` for each negative definite principal submatrix.

    Subsets of the registry are grown depth-first in index order, so the
    leading minors of a subset are those of its ancestors plus its own
    determinant; a subset that fails has no negative definite supersets and
    its branch is cut.  ``max_subsets`` caps the number of subsets examined
    and raises :class:`EnumerationTooLarge` rather than truncating.
    """
    M = X.curve_matrix
    n = len(M)
    if max_size is None:
        max_size = min(n, X.rank - 1)
    max_size = min(max_size, n)
    # every 2x2 principal block of a negative definite matrix is negative
    # definite, so j can only join subsets of curves it is compatible with
    compat = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and M[i][i] < 0 and M[j][j] < 0 and M[i][j] ** 2 < M[i][i] * M[j][j]:
                compat[i] |= 1 << j
    everything = sum(1 << j for j in range(n) if M[j][j] < 0)
    visited = 0
    # each stack entry carries the Bareiss columns of its subset and the
    # bitmask of curves still compatible with all of its members
    stack: list[tuple[tuple[int, ...], list, int]] = [((), [], everything)]
    while stack:
        subset, columns, allowed = stack.pop()
        if len(subset) >= max_size:
            continue
        start = subset[-1] + 1 if subset else 0
        allowed >>= start
        j = start
        while allowed:
            if not allowed & 1:
                skip = (allowed & -allowed).bit_length() - 1
                allowed >>= skip
                j += skip
                continue
            visited += 1
            if max_subsets is not None and visited > max_subsets:
                required = _naive_count(n, max_size)
                raise EnumerationTooLarge(
                    f"{X.name}: enumeration may need up to {required} subsets,"
                    f" cap is {max_subsets}",
                    required=required,
                )
            col = linalg.extend_bareiss(columns, [M[i][j] for i in subset], M[j][j])
            d = col[-1]
            cand = subset + (j,)
            # a negative definite k x k matrix has determinant of sign (-1)^k
            if d != 0 and (d > 0) == (len(cand) % 2 == 0):
                yield cand, d
                mask = (allowed >> 1) << (j + 1)
                stack.append((cand, columns + [col], mask & compat[j]))
            allowed >>= 1
            j += 1


def enumerate_denominator_bound(
    X: SurfaceModel,
    max_size: int | None = None,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> int:
    """Largest ``|det|`` over negative definite principal submatrices of the
    full curve intersection matrix, sizes ``1..max_size``.

    ``max_size`` defaults to ``min(#curves, rank - 1)``.  Returns 1 when the
    registry is empty.
    """
    best = 1
    for _, d in negative_definite_submatrices(X, max_size, max_subsets):
        best = max(best, abs(d))
    return best


def theorem_d_bound(b: int, rho: int) -> int:
    if b < 1 or rho < 1:
        raise ValueError("b and rho must be positive")
    return b ** (rho - 1)


def theorem_b_bound(d: int, delta_abs: int) -> int:
    if d < 1:
        raise ValueError("d must be positive")
    return d * factorial(d) * delta_abs


def primitive_decomposition(C: Sequence[int]) -> PrimitiveDecomposition:
    k = 0
    for x in C:
        k = gcd(k, x)
    if k == 0:
        raise ZeroClass("the zero class has no primitive generator")
    return PrimitiveDecomposition(tuple(x // k for x in C), k)


def realize_denominator(X: SurfaceModel, curve: int) -> tuple[tuple[int, ...], int]:
    """Divisor ``A + kC`` whose negative part carries the denominator of ``alpha``.

    With ``alpha = -A.C / C^2`` the class ``A + alpha C`` is orthogonal to
    ``C``, so ``A + kC = (A + alpha C) + (k - alpha) C`` for any ``k > alpha``
    as long as ``A + alpha C`` is nef.  ``k`` is the least integer above
    ``alpha``.  Returns the divisor and the predicted denominator
    ``-C^2 / gcd(C^2, A.C)``.
    """
    C = X.curves[curve]
    A = X.ample
    ac = X.pairing(A, C.cls)
    c2 = C.self_int
    alpha = Fraction(-ac, c2)
    P = tuple(Fraction(a) + alpha * c for a, c in zip(A, C.cls))
    if not X.is_nef(P):
        # cannot happen for a registry of distinct irreducible curves
        raise ZariskiError(f"A + alpha*{C.name} is not nef on {X.name}: {X.nef_witnesses(P)}")
    k = max(1, floor(alpha) + 1)
    D = tuple(a + k * c for a, c in zip(A, C.cls))
    return D, -c2 // gcd(c2, ac)


def adjugate_divisibility_check(X: SurfaceModel, C: Sequence[int], t: int) -> bool:
    """Whether ``t`` divides ``C.D`` for every integral ``D``.

    It is enough to look at the entries of ``c^t G``, i.e. ``C`` against the
    basis vectors.
    """
    if t == 0:
        raise ValueError("t must be nonzero")
    return all(x % t == 0 for x in linalg.vecmat(C, X.gram))


def surface_bounds(
    X: SurfaceModel,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> SurfaceBounds:
    b = negativity_bound(X)
    rho = X.rank
    delta = abs(X.discriminant())
    d_enum = enumerate_denominator_bound(X, max_subsets=max_subsets)
    return SurfaceBounds(
        b=b,
        rho=rho,
        delta_abs=delta,
        d_enum=d_enum,
        d_theorem=theorem_d_bound(max(b, 1), rho),
        b_theorem=theorem_b_bound(d_enum, delta),
    )

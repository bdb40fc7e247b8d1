"""Zariski decomposition of divisor classes on a :class:`SurfaceModel`.

For a pseudo-effective ``D`` the negative part ``N = sum a_i N_i`` is found
by growing a support set: solve ``S a = b`` with ``S = [N_i.N_j]`` and
``b = [D.N_j]``, look for registered curves meeting ``P = D - N`` negatively,
add all of them and solve again.  Support only grows, so the loop stops
after at most ``rank - 1`` rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import _subsets, linalg
from .errors import DimensionMismatch, NotPseudoEffective, OracleLimitExceeded, ZariskiError
from .surface import SurfaceModel, Violation


@dataclass(frozen=True)
class NegativePartSystem:
    """The linear system ``S a = b`` for a fixed candidate support."""

    support: tuple[int, ...]
    S: linalg.IntMatrix
    b: tuple[int, ...]

    @classmethod
    def build(cls, X: SurfaceModel, D: Sequence[int], support: Sequence[int]):
        support = tuple(support)
        S = linalg.principal_submatrix(X.curve_matrix, support)
        b = tuple(X.pairing(D, X.curves[i].cls) for i in support)
        return cls(support, S, b)

    def is_negative_definite(self) -> bool:
        return linalg.is_negative_definite(self.S)

    def solve(self) -> tuple[Fraction, ...]:
        return linalg.solve(self.S, self.b)


@dataclass(frozen=True)
class ZariskiDecomposition:
    """``D = P + sum(a_i * C_i)`` with every ``a_i > 0``.

    ``negative`` holds ``(curve index, coefficient)`` pairs sorted by index.
    """

    positive: tuple[Fraction, ...]
    negative: tuple[tuple[int, Fraction], ...]
    denominator: int

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.negative)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(a for _, a in self.negative)

    def negative_class(self, X: SurfaceModel) -> tuple[Fraction, ...]:
        N = [Fraction(0)] * X.rank
        for i, a in self.negative:
            for k, x in enumerate(X.curves[i].cls):
                N[k] += a * x
        return tuple(N)

    @property
    def is_nef(self) -> bool:
        """True when the negative part is empty."""
        return not self.negative


def denominator_of(Z: ZariskiDecomposition) -> int:
    """lcm of the reduced denominators of the negative-part coefficients."""
    return lcm(1, *(a.denominator for _, a in Z.negative))


def _positive_part(X: SurfaceModel, D, support, coeffs):
    P = [Fraction(x) for x in D]
    for i, a in zip(support, coeffs):
        for k, x in enumerate(X.curves[i].cls):
            if x:
                P[k] -= a * x
    return tuple(P)


def _make(X, D, support, coeffs) -> ZariskiDecomposition:
    kept = [(i, a) for i, a in zip(support, coeffs) if a != 0]
    P = _positive_part(X, D, [i for i, _ in kept], [a for _, a in kept])
    Z = ZariskiDecomposition(P, tuple(kept), 1)
    return ZariskiDecomposition(P, tuple(kept), denominator_of(Z))


def _check_integral(D) -> tuple[int, ...]:
    out = []
    for x in D:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError("divisor class must be integral")
            x = x.numerator
        if not isinstance(x, int) or isinstance(x, bool):
            raise TypeError(f"divisor coordinate {x!r} is not an integer")
        out.append(x)
    return tuple(out)


def _rescale(X, D, solver) -> ZariskiDecomposition:
    # rational input: decompose m*D and divide back
    D = tuple(Fraction(x) for x in D)
    m = lcm(1, *(x.denominator for x in D))
    Z = solver(X, tuple(int(x * m) for x in D))
    P = tuple(x / m for x in Z.positive)
    neg = tuple((i, a / m) for i, a in Z.negative)
    return ZariskiDecomposition(P, neg, lcm(1, *(a.denominator for _, a in neg)))


def decompose(X: SurfaceModel, D: Sequence[int]) -> ZariskiDecomposition:
    """Zariski decomposition of the class ``D`` on ``X``.

    Raises :class:`NotPseudoEffective` when the support stops being negative
    definite, a coefficient turns negative, or the final positive part fails
    ``P^2 >= 0`` / ``P.A >= 0``.  ``witness`` on the exception says which.
    Rational classes are accepted and handled by clearing denominators.
    """
    if len(D) != X.rank:
        raise DimensionMismatch(f"class has {len(D)} coordinates, model has rank {X.rank}")
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in D):
        return _rescale(X, D, decompose)
    D = _check_integral(D)

    support: list[int] = []
    coeffs: tuple[Fraction, ...] = ()
    P = tuple(Fraction(x) for x in D)
    for _ in range(X.rank + 1):
        violators = [
            j for j, x in enumerate(X.curve_pairings(P))
            if j not in support and x < 0
        ]
        if not violators:
            break
        support = sorted(support + violators)
        system = NegativePartSystem.build(X, D, support)
        if not system.is_negative_definite():
            names = ", ".join(X.curves[i].name for i in support)
            raise NotPseudoEffective(
                f"intersection matrix of support {{{names}}} is not negative definite",
                witness="support not negative definite",
            )
        coeffs = system.solve()
        bad = [(X.curves[i].name, a) for i, a in zip(support, coeffs) if a < 0]
        if bad:
            name, a = bad[0]
            raise NotPseudoEffective(
                f"coefficient of {name} is {a} < 0", witness="negative coefficient"
            )
        P = _positive_part(X, D, support, coeffs)
    else:  # pragma: no cover - support is bounded by the number of curves
        raise ZariskiError("support growth did not terminate")

    sq = X.pairing(P, P)
    if sq < 0:
        raise NotPseudoEffective(f"positive part has P^2 = {sq} < 0", witness="P^2 < 0")
    pa = X.pairing(P, X.ample)
    if pa < 0:
        raise NotPseudoEffective(f"positive part has P.A = {pa} < 0", witness="P.A < 0")

    Z = _make(X, D, support, coeffs)
    problems = verify(X, D, Z)
    if problems:
        raise ZariskiError("decomposition failed verification: " + "; ".join(map(str, problems)))
    return Z


def verify(X: SurfaceModel, D: Sequence, Z: ZariskiDecomposition) -> list[Violation]:
    """Check the defining conditions of a Zariski decomposition exactly.

    Conditions: ``D = P + N``; ``P`` nef (finite registry test); every
    coefficient positive; support intersection matrix negative definite;
    ``P.N_i = 0`` for each support curve.  Also checks the support bound
    ``|support| <= rank - 1`` and the stored denominator.
    """
    out: list[Violation] = []
    n = X.rank
    if len(D) != n or len(Z.positive) != n:
        return [Violation("dimension", f"expected {n} coordinates")]
    support = Z.support
    for i in support:
        if not 0 <= i < len(X.curves):
            out.append(Violation("registry", f"support index {i} is not a registered curve"))
    if out:
        return out
    if len(set(support)) != len(support):
        out.append(Violation("support", "repeated curve in support"))

    total = [Fraction(x) for x in Z.positive]
    for k, x in enumerate(Z.negative_class(X)):
        total[k] += x
    if tuple(total) != tuple(Fraction(x) for x in D):
        out.append(Violation("sum", "D != P + N"))

    for i, a in Z.negative:
        if a <= 0:
            out.append(Violation("effective", f"coefficient of {X.curves[i].name} is {a}, not > 0"))

    if support:
        S = linalg.principal_submatrix(X.curve_matrix, support)
        if not linalg.is_symmetric(S) or not linalg.is_negative_definite(S):
            out.append(Violation("negative definite", f"support matrix {S} is not negative definite"))
        if len(support) > n - 1:
            out.append(Violation("support bound", f"|support| = {len(support)} > rank - 1 = {n - 1}"))

    pairings = X.curve_pairings(Z.positive)
    for i in support:
        x = pairings[i]
        if x != 0:
            out.append(Violation("orthogonality", f"P.{X.curves[i].name} = {x} != 0"))

    for w in X.nef_witnesses(Z.positive):
        out.append(Violation("nef", w))

    if Z.denominator != denominator_of(Z):
        out.append(Violation("denominator", f"stored {Z.denominator}, actual {denominator_of(Z)}"))
    return out


# -- brute-force oracle -------------------------------------------------------

def _negative_definite_subsets(X: SurfaceModel):
    """Every curve subset (sorted tuples) whose intersection matrix is negative definite.

    Principal submatrices of a negative definite matrix are negative
    definite, so subsets are grown depth-first and a branch dies as soon as
    it fails.  The empty subset comes first.
    """
    M = X.curve_matrix
    n = len(M)
    out = [()]

    def grow(subset):
        start = subset[-1] + 1 if subset else 0
        for j in range(start, n):
            cand = subset + (j,)
            if linalg.is_negative_definite(linalg.principal_submatrix(M, cand)):
                out.append(cand)
                grow(cand)

    grow(())
    return out


@lru_cache(maxsize=64)
def _oracle_table(X: SurfaceModel):
    """``(subset, bitmask, det, adjugate)`` for every nonempty negative definite subset."""
    M = X.curve_matrix
    table = []
    for T in _negative_definite_subsets(X)[1:]:
        S = linalg.principal_submatrix(M, T)
        mask = sum(1 << i for i in T)
        table.append((T, mask, linalg.det(S), linalg.adjugate(S)))
    return table


@lru_cache(maxsize=64)
def _oracle_levels(X: SurfaceModel):
    return _subsets.build_levels(X.curve_matrix)


def _accepted_python(X, b, DD, DA, A_curves, required):
    M = X.curve_matrix
    n = len(M)
    out = []
    for T, mask, det, adj in _oracle_table(X):
        if mask & required != required:
            continue
        # Cramer: a_i = num_i / det with num = adj(S) b_T; checks are scaled by det
        num = [sum(adj[i][l] * b[T[l]] for l in range(len(T))) for i in range(len(T))]
        sgn = 1 if det > 0 else -1
        if any(x * sgn < 0 for x in num):
            continue
        if any((det * b[j] - sum(x * M[t][j] for t, x in zip(T, num))) * sgn < 0 for j in range(n)):
            continue
        pa = det * DA - sum(x * A_curves[t] for t, x in zip(T, num))
        # P.P = P.D because P.C_t = 0 on T
        pp = det * DD - sum(x * b[t] for t, x in zip(T, num))
        if pa * sgn < 0 or pp * sgn < 0:
            continue
        out.append((T, num, det))
    return out


def decompose_oracle(
    X: SurfaceModel,
    D: Sequence[int],
    limit: int = 16,
    vectorized: bool = True,
) -> ZariskiDecomposition:
    """Independent Zariski decomposition by exhaustive subset search.

    Tries every negative definite subset ``T`` of the registry, solves for
    the coefficients by Cramer's rule and accepts ``T`` when they are all
    ``>= 0`` and the resulting ``P`` passes the nef test.  Uniqueness means
    every accepted subset gives the same ``P``; that is asserted, not assumed.

    When distinct registered curves meet non-negatively, a curve with
    ``D.C < 0`` outside ``T`` would get ``P.C <= D.C < 0``, so only
    supersets of those curves are examined.  This skips subsets that would
    be rejected anyway and leaves the result unchanged.

    ``vectorized`` runs the search in batched int64 when the numbers
    provably fit, and in Python integers otherwise.
    """
    if len(X.curves) > limit:
        raise OracleLimitExceeded(f"{len(X.curves)} curves exceed the oracle limit {limit}")
    if len(D) != X.rank:
        raise DimensionMismatch(f"class has {len(D)} coordinates, model has rank {X.rank}")
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in D):
        return _rescale(X, D, lambda X_, D_: decompose_oracle(X_, D_, limit, vectorized))
    D = _check_integral(D)
    M = X.curve_matrix
    n = len(M)
    b = [X.pairing(D, c.cls) for c in X.curves]
    DD = X.pairing(D, D)
    DA = X.pairing(D, X.ample)
    A_curves = [X.pairing(X.ample, c.cls) for c in X.curves]
    offdiag_nonneg = all(M[i][j] >= 0 for i in range(n) for j in range(n) if i != j)
    required = sum(1 << j for j in range(n) if b[j] < 0) if offdiag_nonneg else 0

    accepted = []
    if all(x >= 0 for x in b) and DA >= 0 and DD >= 0:
        accepted.append(((), [], 1))
    found = None
    if vectorized:
        levels = _oracle_levels(X)
        if levels is not None:
            found = _subsets.accepted_subsets(levels, M, b, DD, DA, A_curves, required)
    if found is None:
        found = _accepted_python(X, b, DD, DA, A_curves, required)
    accepted += found

    if not accepted:
        raise NotPseudoEffective("no curve subset yields a valid decomposition", witness="oracle: no subset")
    results = {_make(X, D, T, [Fraction(x, det) for x in num]) for T, num, det in accepted}
    if len(results) != 1:
        raise ZariskiError(f"oracle found {len(results)} distinct decompositions; uniqueness violated")
    return results.pop()

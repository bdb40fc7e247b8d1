"""Builders for the gallery surfaces and scans over their families.

Blow-ups of the plane use the basis ``H, E1, ..., Er`` with intersection
form ``diag(1, -1, ..., -1)``.  Their ample class is ``m H - sum E_i`` for
the least ``m`` that is positive on every registered curve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterable, Sequence

from . import bounds
from .decomposition import decompose
from .errors import InvalidParameter
from .surface import SurfaceModel, make_model


def _blowup_gram(r):
    return [[(1 if i == 0 else -1) if i == j else 0 for j in range(r + 1)] for i in range(r + 1)]


def _blowup_basis(r):
    return ("H",) + tuple(f"E{i}" for i in range(1, r + 1))


def _exceptional(r, i):
    return tuple(int(k == i) for k in range(r + 1))


def _minimal_ample(r, classes) -> tuple[int, ...]:
    """Least ``m`` with ``(m H - sum E).C > 0`` for all ``C`` and positive square."""
    m = 1
    while True:
        A = (m,) + (-1,) * r
        square = m * m - r
        if square > 0 and all(m * c[0] + sum(c[1:]) > 0 for c in classes):
            return A
        m += 1


def _blowup_model(name, r, curves):
    A = _minimal_ample(r, [cls for _, cls in curves])
    return make_model(name, _blowup_gram(r), A, curves, _blowup_basis(r))


def build_collinear(r: int) -> SurfaceModel:
    """Blow-up of ``r`` points on a line; curves ``E1..Er`` and ``Lt = H - sum E_i``."""
    if not isinstance(r, int) or r < 2:
        raise InvalidParameter(f"collinear needs r >= 2, got {r!r}")
    curves = [(f"E{i}", _exceptional(r, i)) for i in range(1, r + 1)]
    curves.append(("Lt", (1,) + (-1,) * r))
    return _blowup_model(f"collinear:{r}", r, curves)


def build_two_lines(k1: int, k2: int, cross_lines: bool = False) -> SurfaceModel:
    """Blow-up of ``k1`` points on a line ``L1`` and ``k2`` on another line ``L2``.

    The registry holds ``E1..E(k1+k2)`` and the strict transforms ``L1``,
    ``L2`` (points ``1..k1`` lie on ``L1``).  The lines ``H - E_a - E_b``
    joining a point of each group are (-1)-curves too; they are only
    registered when ``cross_lines`` is set.
    """
    for k in (k1, k2):
        if not isinstance(k, int) or k < 2:
            raise InvalidParameter(f"two-lines needs k1, k2 >= 2, got {k1!r}, {k2!r}")
    r = k1 + k2
    curves = [(f"E{i}", _exceptional(r, i)) for i in range(1, r + 1)]
    curves.append(("L1", (1,) + (-1,) * k1 + (0,) * k2))
    curves.append(("L2", (1,) + (0,) * k1 + (-1,) * k2))
    if cross_lines:
        for a in range(1, k1 + 1):
            for b in range(k1 + 1, r + 1):
                cls = [0] * (r + 1)
                cls[0], cls[a], cls[b] = 1, -1, -1
                curves.append((f"M{a}_{b}", tuple(cls)))
    name = f"two-lines:{k1},{k2}" + ("+cross" if cross_lines else "")
    return _blowup_model(name, r, curves)


def _is_prime(p):
    if p < 2:
        return False
    return all(p % q for q in range(2, isqrt(p) + 1))


def build_frobenius_model(p: int, g: int, n: int) -> SurfaceModel:
    """Rank-2 lattice spanned by a fibre ``F2`` and the Frobenius graph ``G``.

    ``G^2 = p^n (2 - 2g)`` and ``F2.G = 1``.  The ample class is
    ``m F2 + G`` with the least ``m`` positive against ``G``.
    """
    if not isinstance(p, int) or not _is_prime(p):
        raise InvalidParameter(f"p must be prime, got {p!r}")
    if not isinstance(g, int) or g < 2:
        raise InvalidParameter(f"genus must be >= 2, got {g!r}")
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n!r}")
    gamma = p ** n * (2 - 2 * g)
    gram = [[0, 1], [1, gamma]]
    # (m F2 + G).G = m + gamma > 0 and (m F2 + G)^2 = 2m + gamma > 0
    m = 1 - gamma
    return make_model(f"frobenius:{p},{g},{n}", gram, (m, 1), [("G", (0, 1))], ("F2", "G"))


def _exceptional_classes(r: int, box: int) -> list[tuple[int, ...]]:
    """All ``d H - sum m_i E_i`` with ``C^2 = -1``, ``C.K = -1`` and entries in ``[-box, box]``.

    Returned in lattice coordinates ``(d, -m_1, ..., -m_r)``.  The
    constraints are ``sum m_i^2 = d^2 + 1`` and ``sum m_i = 3d - 1``.
    """
    found = []
    for d in range(-box, box + 1):
        target_sq = d * d + 1
        target_sum = 3 * d - 1
        mults = [0] * r

        def fill(i, sq_left, sum_left):
            slots = r - i
            if slots == 0:
                if sq_left == 0 and sum_left == 0:
                    found.append((d,) + tuple(-m for m in mults))
                return
            # Cauchy-Schwarz: (sum of remaining)^2 <= slots * (squares remaining)
            if sum_left * sum_left > slots * sq_left:
                return
            lim = min(box, isqrt(sq_left))
            for m in range(-lim, lim + 1):
                mults[i] = m
                fill(i + 1, sq_left - m * m, sum_left - m)
            mults[i] = 0

        fill(0, target_sq, target_sum)
    return sorted(found, key=lambda c: (c[0], [-x for x in c[1:]]))


def del_pezzo_classes(r: int) -> tuple[list[tuple[int, ...]], int]:
    """Exceptional classes on the blow-up of ``r`` general points.

    The search box grows until two consecutive enlargements find nothing
    new.  Returns the classes and the final box size.
    """
    box = 1
    classes = _exceptional_classes(r, box)
    quiet = 0
    while quiet < 2:
        box += 1
        bigger = _exceptional_classes(r, box)
        quiet = quiet + 1 if len(bigger) == len(classes) else 0
        classes = bigger
    for c in classes:
        d, m = c[0], c[1:]
        assert d * d - sum(x * x for x in m) == -1
        assert -3 * d - sum(m) == -1
    return classes, box


def _del_pezzo_name(cls):
    d, rest = cls[0], cls[1:]
    if d == 0:
        return f"E{rest.index(1) + 1}"
    if d == 1:
        return "L" + "".join(str(i + 1) for i, x in enumerate(rest) if x)
    return f"C{d}_" + "".join(str(-x) for x in rest)


def build_del_pezzo(r: int) -> SurfaceModel:
    """Blow-up of ``r <= 8`` general points; every negative curve is a (-1)-curve."""
    if not isinstance(r, int) or not 1 <= r <= 8:
        raise InvalidParameter(f"del-pezzo needs 1 <= r <= 8, got {r!r}")
    classes, _ = del_pezzo_classes(r)
    curves = [(_del_pezzo_name(c), c) for c in classes]
    return _blowup_model(f"del-pezzo:{r}", r, curves)


# -- gallery specs --------------------------------------------------------------

FAMILIES = {
    "collinear": (build_collinear, 1),
    "two-lines": (build_two_lines, 2),
    "frobenius": (build_frobenius_model, 3),
    "del-pezzo": (build_del_pezzo, 1),
}


def build(spec: str) -> SurfaceModel:
    """Build a model from ``"family:params"``, e.g. ``"two-lines:4,5"``."""
    family, sep, params = spec.partition(":")
    if family not in FAMILIES or not sep:
        raise InvalidParameter(f"unknown gallery spec {spec!r}; families: {', '.join(FAMILIES)}")
    builder, arity = FAMILIES[family]
    try:
        args = [int(x) for x in params.split(",")]
    except ValueError:
        raise InvalidParameter(f"gallery parameters must be integers: {spec!r}") from None
    if len(args) != arity:
        raise InvalidParameter(f"{family} takes {arity} parameter(s), got {len(args)}")
    return builder(*args)


def gallery_specs() -> list[str]:
    """Canonical list of gallery instances used by the test and acceptance suites."""
    specs = [f"collinear:{r}" for r in range(2, 13)]
    specs += [f"two-lines:{a},{b}" for a, b in
              [(2, 2), (4, 5), (4, 7), (4, 9), (5, 7), (5, 9), (7, 9)]]
    specs += [f"frobenius:{p},{g},{n}" for p, g in [(2, 2), (3, 2), (2, 3)] for n in (1, 2, 3)]
    specs += [f"del-pezzo:{r}" for r in range(1, 9)]
    return specs


# -- family scans -----------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    params: tuple[int, ...]
    b: int
    d_enum: int
    realized: int
    delta_abs: int
    rho: int


@dataclass
class FamilyScan:
    family: str
    columns: tuple[str, ...]
    rows: list[ScanRow] = field(default_factory=list)


def witness_divisor(family: str, X: SurfaceModel) -> tuple[int, ...]:
    """The divisor whose decomposition exhibits the family's large denominator."""
    if family == "collinear":
        # Lt + H
        lt = X.curves[X.curve_index("Lt")].cls
        return (lt[0] + 1,) + lt[1:]
    if family == "two-lines":
        l1 = X.curves[X.curve_index("L1")].cls
        l2 = X.curves[X.curve_index("L2")].cls
        # H + L1 + L2
        D = [a + b for a, b in zip(l1, l2)]
        D[0] += 1
        return tuple(D)
    if family == "frobenius":
        return (1, 1)
    raise InvalidParameter(f"family {family!r} has no distinguished divisor")


def scan_family(
    family: str,
    params: Iterable[Sequence[int]],
    max_subsets: int = bounds.DEFAULT_MAX_SUBSETS,
) -> FamilyScan:
    if family not in ("collinear", "two-lines", "frobenius"):
        raise InvalidParameter(f"cannot scan family {family!r}")
    builder, arity = FAMILIES[family]
    names = {
        "collinear": ("r",),
        "two-lines": ("k1", "k2"),
        "frobenius": ("p", "g", "n"),
    }[family]
    scan = FamilyScan(family, names + ("b", "d_enum", "realized", "delta_abs", "rho"))
    for p in sorted(tuple(p) for p in params):
        if len(p) != arity:
            raise InvalidParameter(f"{family} takes {arity} parameter(s), got {p}")
        X = builder(*p)
        Z = decompose(X, witness_divisor(family, X))
        sb = bounds.surface_bounds(X, max_subsets=max_subsets)
        scan.rows.append(ScanRow(p, sb.b, sb.d_enum, Z.denominator, sb.delta_abs, sb.rho))
    return scan


def coprime_pairs(k1s: Iterable[int], k2s: Iterable[int]) -> list[tuple[int, int]]:
    return [(a, b) for a, b in itertools.product(k1s, k2s) if gcd(a, b) == 1]

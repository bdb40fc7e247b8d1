"""Lattice models of surfaces.

A :class:`SurfaceModel` is the intersection form on the Néron-Severi lattice
in a fixed basis, an ample class, and a registry that is assumed to list
*every* negative curve on the surface.  Under that assumption nefness is
decided by a finite test (see :meth:`SurfaceModel.is_nef`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from pathlib import Path
from typing import Iterable, Sequence

from . import linalg
from .errors import DimensionMismatch, ParseError, ValidationError

Vector = tuple  # tuple of int or Fraction, length = rank


@dataclass(frozen=True)
class CurveRecord:
    name: str
    cls: tuple[int, ...]
    self_int: int


@dataclass(frozen=True)
class Violation:
    """One failed invariant, with a human-readable witness."""

    invariant: str
    detail: str

    def __str__(self):
        return f"{self.invariant}: {self.detail}"


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    gram: linalg.IntMatrix
    ample: tuple[int, ...]
    curves: tuple[CurveRecord, ...]
    basis: tuple[str, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def basis_names(self) -> tuple[str, ...]:
        return self.basis or tuple(f"e{i}" for i in range(self.rank))

    def _check(self, u):
        if len(u) != self.rank:
            raise DimensionMismatch(f"class has {len(u)} coordinates, model has rank {self.rank}")

    def pairing(self, u: Sequence, v: Sequence):
        """Intersection number ``u^t G v``; exact for int and Fraction input."""
        self._check(u)
        self._check(v)
        u, du = _clear_denominators(u)
        v, dv = _clear_denominators(v)
        G = self.gram
        total = 0
        for i, x in enumerate(u):
            if x:
                row = G[i]
                total += x * sum(row[j] * y for j, y in enumerate(v) if y)
        return total if du * dv == 1 else Fraction(total, du * dv)

    @cached_property
    def _curve_duals(self) -> tuple[tuple[int, ...], ...]:
        return tuple(linalg.vecmat(c.cls, self.gram) for c in self.curves)

    def curve_pairings(self, P: Sequence) -> list:
        """``[P.C for C in curves]``, using the cached rows ``C^t G``."""
        self._check(P)
        P, d = _clear_denominators(P)
        out = [sum(x * y for x, y in zip(P, dual) if x) for dual in self._curve_duals]
        return out if d == 1 else [Fraction(x, d) for x in out]

    def discriminant(self) -> int:
        return linalg.det(self.gram)

    @cached_property
    def curve_matrix(self) -> linalg.IntMatrix:
        """Intersection matrix of all registered curves."""
        classes = [c.cls for c in self.curves]
        return tuple(tuple(self.pairing(a, b) for b in classes) for a in classes)

    @cached_property
    def _curve_index(self) -> dict[str, int]:
        return {c.name: i for i, c in enumerate(self.curves)}

    def curve_index(self, name: str) -> int:
        try:
            return self._curve_index[name]
        except KeyError:
            raise KeyError(f"no curve named {name!r} on {self.name}") from None

    def is_nef(self, P: Sequence) -> bool:
        """Finite nefness test against the registry.

        ``P`` is nef iff ``P^2 >= 0``, ``P.A >= 0`` and ``P.C >= 0`` for every
        registered negative curve ``C``.  Classes in the closed positive cone
        pair non-negatively with each other, so once the registry is complete
        only negative curves can obstruct nefness.
        """
        return not self.nef_witnesses(P)

    def nef_witnesses(self, P: Sequence) -> list[str]:
        out = []
        sq = self.pairing(P, P)
        if sq < 0:
            out.append(f"P^2 = {sq} < 0")
        pa = self.pairing(P, self.ample)
        if pa < 0:
            out.append(f"P.A = {pa} < 0")
        for c, x in zip(self.curves, self.curve_pairings(P)):
            if x < 0:
                out.append(f"P.{c.name} = {x} < 0")
        return out


def _clear_denominators(u) -> tuple[tuple[int, ...], int]:
    """Write ``u`` as ``w / d`` with ``w`` integral."""
    if all(type(x) is int for x in u):
        return tuple(u), 1
    d = lcm(1, *(Fraction(x).denominator for x in u))
    if d == 1:
        return tuple(int(x) for x in u), 1
    return tuple(int(x * d) for x in u), d


def make_model(
    name: str,
    gram: Sequence[Sequence[int]],
    ample: Sequence[int],
    curves: Iterable[tuple[str, Sequence[int]]],
    basis: Sequence[str] = (),
) -> SurfaceModel:
    """Build a model; self-intersections are computed, never supplied."""
    G = linalg.as_int_matrix(gram)
    n = len(G)
    ample = tuple(ample)
    if len(ample) != n:
        raise DimensionMismatch(f"ample has {len(ample)} coordinates, gram is {n}x{n}")
    basis = tuple(basis)
    if basis and len(basis) != n:
        raise DimensionMismatch(f"{len(basis)} basis names for rank {n}")
    records = []
    for cname, cls in curves:
        cls = tuple(cls)
        if len(cls) != n:
            raise DimensionMismatch(f"curve {cname} has {len(cls)} coordinates, gram is {n}x{n}")
        sq = sum(cls[i] * G[i][j] * cls[j] for i in range(n) for j in range(n))
        records.append(CurveRecord(cname, cls, sq))
    return SurfaceModel(name, G, ample, tuple(records), basis)


def validate(X: SurfaceModel) -> list[Violation]:
    """Check every model invariant; an empty list means the model is valid."""
    out: list[Violation] = []
    G = X.gram
    n = X.rank
    if n == 0:
        return [Violation("rank", "rank must be positive")]
    if not linalg.is_symmetric(G):
        i, j = next((i, j) for i in range(n) for j in range(n) if G[i][j] != G[j][i])
        out.append(Violation("symmetry", f"gram[{i}][{j}] = {G[i][j]} != gram[{j}][{i}] = {G[j][i]}"))
        # signature and pairings are meaningless without symmetry
        return out
    sig = linalg.signature(G)
    if sig != (1, n - 1, 0):
        out.append(Violation("signature", f"signature {sig} != {(1, n - 1, 0)}"))
    if len(X.ample) != n:
        out.append(Violation("ample", f"ample has {len(X.ample)} coordinates, rank is {n}"))
        return out
    a2 = X.pairing(X.ample, X.ample)
    if a2 <= 0:
        out.append(Violation("ample", f"A^2 = {a2} <= 0"))
    if X.basis and len(X.basis) != n:
        out.append(Violation("basis", f"{len(X.basis)} basis names for rank {n}"))
    seen_names: dict[str, int] = {}
    seen_classes: dict[tuple, str] = {}
    for c in X.curves:
        if len(c.cls) != n:
            out.append(Violation("dimension", f"curve {c.name} has {len(c.cls)} coordinates"))
            continue
        sq = X.pairing(c.cls, c.cls)
        if sq != c.self_int:
            out.append(Violation("self-intersection cache", f"{c.name}: cached {c.self_int}, actual {sq}"))
        if sq >= 0:
            out.append(Violation("negativity", f"{c.name}^2 = {sq} is not negative"))
        ac = X.pairing(X.ample, c.cls)
        if ac <= 0:
            out.append(Violation("ample", f"A.{c.name} = {ac} <= 0"))
        if c.name in seen_names:
            out.append(Violation("distinct names", f"curve name {c.name} repeated"))
        seen_names[c.name] = 1
        if c.cls in seen_classes:
            out.append(Violation("distinct classes", f"{c.name} has the same class as {seen_classes[c.cls]}"))
        seen_classes.setdefault(c.cls, c.name)
    return out


# -- file format -------------------------------------------------------------

def to_dict(X: SurfaceModel) -> dict:
    d = {
        "name": X.name,
        "rank": X.rank,
        "gram": [list(row) for row in X.gram],
        "ample": list(X.ample),
        "curves": [{"name": c.name, "class": list(c.cls)} for c in X.curves],
    }
    if X.basis:
        d["basis"] = list(X.basis)
    return d


def _int_list(value, where):
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list of integers")
    for k, x in enumerate(value):
        if not isinstance(x, int) or isinstance(x, bool):
            raise ParseError(f"{where}[{k}]: expected an integer, got {x!r}")
    return value


def from_dict(data: dict, *, check: bool = True) -> SurfaceModel:
    """Parse the JSON surface schema.  Raises ParseError or ValidationError."""
    if not isinstance(data, dict):
        raise ParseError("top level: expected an object")
    for key in ("name", "rank", "gram", "ample", "curves"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    name = data["name"]
    if not isinstance(name, str):
        raise ParseError("name: expected a string")
    rank = data["rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise ParseError("rank: expected a positive integer")
    gram = data["gram"]
    if not isinstance(gram, list) or len(gram) != rank:
        raise ParseError(f"gram: expected {rank} rows")
    for i, row in enumerate(gram):
        _int_list(row, f"gram[{i}]")
        if len(row) != rank:
            raise ParseError(f"gram[{i}]: expected {rank} entries, got {len(row)}")
    ample = _int_list(data["ample"], "ample")
    if len(ample) != rank:
        raise ParseError(f"ample: expected {rank} entries, got {len(ample)}")
    if not isinstance(data["curves"], list):
        raise ParseError("curves: expected a list")
    curves = []
    for k, entry in enumerate(data["curves"]):
        if not isinstance(entry, dict) or "name" not in entry or "class" not in entry:
            raise ParseError(f"curves[{k}]: expected an object with 'name' and 'class'")
        if not isinstance(entry["name"], str):
            raise ParseError(f"curves[{k}].name: expected a string")
        cls = _int_list(entry["class"], f"curves[{k}].class")
        if len(cls) != rank:
            raise ParseError(f"curves[{k}].class: expected {rank} entries, got {len(cls)}")
        curves.append((entry["name"], cls))
    basis = data.get("basis", [])
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        raise ParseError("basis: expected a list of strings")
    if basis and len(basis) != rank:
        raise ParseError(f"basis: expected {rank} names, got {len(basis)}")
    X = make_model(name, gram, ample, curves, basis)
    if check:
        problems = validate(X)
        if problems:
            raise ValidationError(
                "invalid surface model: " + "; ".join(map(str, problems)), problems
            )
    return X


def dumps(X: SurfaceModel) -> str:
    return json.dumps(to_dict(X), indent=2) + "\n"


def loads(text: str, *, check: bool = True) -> SurfaceModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data, check=check)


def save(X: SurfaceModel, path) -> None:
    Path(path).write_text(dumps(X), encoding="utf-8")


def load(path, *, check: bool = True) -> SurfaceModel:
    return loads(Path(path).read_text(encoding="utf-8"), check=check)


# -- small helpers on classes -------------------------------------------------

def add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u) -> tuple:
    return tuple(c * a for a in u)


def to_rational(u) -> tuple[Fraction, ...]:
    return tuple(Fraction(a) for a in u)

import json
import re
from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zariski import gallery, surface
from zariski.errors import DimensionMismatch, ParseError, ValidationError


def plane_blowup_one():
    return surface.make_model("F1", [[1, 0], [0, -1]], [2, -1], [("E", [0, 1])], ["H", "E"])


def test_make_model_computes_self_intersection():
    X = plane_blowup_one()
    assert X.curves[0].self_int == -1
    assert X.rank == 2
    assert X.discriminant() == -1
    assert X.curve_matrix == ((-1,),)
    assert surface.validate(X) == []


def test_pairing_exact_and_checked():
    X = plane_blowup_one()
    assert X.pairing((1, 0), (1, 0)) == 1
    assert X.pairing((Fraction(1, 2), 0), (1, 1)) == Fraction(1, 2)
    with pytest.raises(DimensionMismatch):
        X.pairing((1,), (1, 0))


def test_default_basis_names():
    X = surface.make_model("x", [[1, 0], [0, -1]], [2, -1], [])
    assert X.basis_names == ("e0", "e1")


def test_nef_test():
    X = plane_blowup_one()
    assert X.is_nef((1, 0))
    assert X.is_nef((1, -1))     # H - E, the fibre class
    assert not X.is_nef((0, -1))  # -E has negative square
    assert not X.is_nef((1, 1))   # H + E meets E negatively
    assert X.nef_witnesses((1, 1)) == ["P.E = -1 < 0"]


@pytest.mark.parametrize(
    "gram, ample, curves, invariant",
    [
        ([[1, 1], [0, -1]], [2, -1], [], "symmetry"),
        ([[1, 0], [0, 1]], [1, 0], [], "signature"),
        ([[1, 0], [0, -1]], [1, -2], [], "ample"),
        ([[1, 0], [0, -1]], [2, -1], [("C", [1, 0])], "negativity"),
        ([[1, 0], [0, -1]], [2, -1], [("C", [0, 1]), ("C", [1, -2])], "distinct names"),
        ([[1, 0], [0, -1]], [2, -1], [("C", [0, 1]), ("D", [0, 1])], "distinct classes"),
        ([[1, 0], [0, -1]], [1, 1], [("C", [0, -1])], "ample"),
    ],
)
def test_validate_reports(gram, ample, curves, invariant):
    X = surface.make_model("bad", gram, ample, curves)
    problems = surface.validate(X)
    assert invariant in {p.invariant for p in problems}


def test_validate_catches_stale_cache():
    X = plane_blowup_one()
    bad = surface.SurfaceModel(
        X.name, X.gram, X.ample, (surface.CurveRecord("E", (0, 1), -2),), X.basis
    )
    assert [p.invariant for p in surface.validate(bad)] == ["self-intersection cache"]


@pytest.mark.parametrize("spec", gallery.gallery_specs())
def test_round_trip(spec, tmp_path):
    X = gallery.build(spec)
    assert surface.loads(surface.dumps(X)) == X
    path = tmp_path / "m.json"
    surface.save(X, path)
    assert surface.load(path) == X


def test_json_schema_fields():
    X = gallery.build("collinear:3")
    data = json.loads(surface.dumps(X))
    assert set(data) == {"name", "rank", "gram", "ample", "curves", "basis"}
    assert data["curves"][-1] == {"name": "Lt", "class": [1, -1, -1, -1]}


@pytest.mark.parametrize(
    "text, where",
    [
        ("{", "line 1"),
        ("[]", "top level"),
        ('{"name": "x", "rank": 2, "gram": [[1,0]], "ample": [1,0], "curves": []}', "gram"),
        ('{"name": "x", "rank": 2, "gram": [[1,0],[0,"a"]], "ample": [1,0], "curves": []}', "gram[1][1]"),
        ('{"name": "x", "rank": 2, "gram": [[1,0],[0,-1]], "ample": [2], "curves": []}', "ample"),
        ('{"name": "x", "rank": 2, "gram": [[1,0],[0,-1]], "ample": [2,-1], "curves": [{"name": "E"}]}', "curves[0]"),
        ('{"name": "x", "rank": 2, "gram": [[1,0],[0,-1]], "ample": [2,-1], "curves": [{"name": "E", "class": [0, 1.5]}]}', "curves[0].class[1]"),
        ('{"rank": 2}', "name"),
    ],
)
def test_parse_errors_name_the_field(text, where):
    with pytest.raises(ParseError, match=re.escape(where)):
        surface.loads(text)


def test_load_validates():
    text = '{"name": "x", "rank": 2, "gram": [[1,0],[0,1]], "ample": [1,0], "curves": []}'
    with pytest.raises(ValidationError) as info:
        surface.loads(text)
    assert info.value.violations[0].invariant == "signature"
    assert surface.loads(text, check=False).name == "x"


@st.composite
def positive_cone(draw):
    # h H - sum e_i E_i with h > 0 and h^2 > sum e_i^2
    e = draw(st.lists(st.integers(-6, 6), min_size=5, max_size=5))
    h = isqrt(sum(x * x for x in e)) + 1 + draw(st.integers(0, 5))
    return (h,) + tuple(e)


@given(positive_cone(), positive_cone())
def test_positive_cone_pairs_positively(x, y):
    # signature (1, n-1): two classes in the same half of the positive cone meet positively
    X = gallery.build("collinear:5")
    assert X.pairing(x, x) > 0 and X.pairing(x, X.ample) > 0
    assert X.pairing(x, y) > 0


def test_vector_helpers():
    assert surface.add((1, 2), (3, 4)) == (4, 6)
    assert surface.sub((1, 2), (3, 4)) == (-2, -2)
    assert surface.scale(Fraction(1, 2), (2, 4)) == (1, 2)
    assert surface.to_rational((1, 2)) == (Fraction(1), Fraction(2))

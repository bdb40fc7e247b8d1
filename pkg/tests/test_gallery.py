import pytest

from zariski import bounds, gallery, surface
from zariski.errors import InvalidParameter


@pytest.mark.parametrize("spec", gallery.gallery_specs())
def test_every_gallery_model_validates(spec):
    X = gallery.build(spec)
    assert surface.validate(X) == []
    assert X.name == spec


@pytest.mark.parametrize("r, count", [(1, 1), (2, 3), (3, 6), (4, 10), (5, 16), (6, 27), (7, 56), (8, 240)])
def test_del_pezzo_counts(r, count):
    classes, box = gallery.del_pezzo_classes(r)
    assert len(classes) == count
    # stable when the box grows further
    assert gallery._exceptional_classes(r, box + 2) == classes


def test_del_pezzo_model():
    X = gallery.build_del_pezzo(6)
    assert len(X.curves) == 27
    assert {c.self_int for c in X.curves} == {-1}
    names = [c.name for c in X.curves]
    assert len(set(names)) == 27
    assert {"E1", "L12", "C2_011111"} <= set(names)
    # -K = 3H - sum E meets every (-1)-curve once
    K = (-3,) + (1,) * 6
    assert all(X.pairing(K, c.cls) == -1 for c in X.curves)


def test_collinear_model():
    X = gallery.build_collinear(6)
    assert [c.name for c in X.curves] == ["E1", "E2", "E3", "E4", "E5", "E6", "Lt"]
    assert X.curves[-1].self_int == -5
    assert X.basis_names == ("H", "E1", "E2", "E3", "E4", "E5", "E6")


def test_two_lines_model():
    X = gallery.build_two_lines(4, 5)
    L1 = X.curves[X.curve_index("L1")]
    L2 = X.curves[X.curve_index("L2")]
    assert (L1.self_int, L2.self_int) == (-3, -4)
    assert X.pairing(L1.cls, L2.cls) == 1
    Y = gallery.build_two_lines(4, 5, cross_lines=True)
    assert len(Y.curves) == len(X.curves) + 20
    assert surface.validate(Y) == []


def test_frobenius_model():
    X = gallery.build_frobenius_model(3, 2, 2)
    assert X.gram == ((0, 1), (1, -18))
    assert X.curves[0].self_int == -18
    assert X.discriminant() == -1


@pytest.mark.parametrize(
    "spec",
    ["nope:1", "collinear", "collinear:1", "collinear:a", "two-lines:4", "two-lines:1,5",
     "frobenius:4,2,1", "frobenius:2,1,1", "frobenius:2,2,0", "del-pezzo:9", "del-pezzo:0"],
)
def test_bad_specs(spec):
    with pytest.raises(InvalidParameter):
        gallery.build(spec)


def test_scan_collinear():
    scan = gallery.scan_family("collinear", [(r,) for r in range(3, 8)])
    assert scan.columns == ("r", "b", "d_enum", "realized", "delta_abs", "rho")
    for row in scan.rows:
        (r,) = row.params
        assert row.b == row.d_enum == row.realized == r - 1
        assert row.rho == r + 1


def test_scan_two_lines_coprime():
    pairs = gallery.coprime_pairs(range(4, 7), range(5, 10))
    assert (4, 6) not in pairs and (4, 5) in pairs
    scan = gallery.scan_family("two-lines", pairs)
    for row in scan.rows:
        k1, k2 = row.params
        assert row.realized == k1 * k2 - k1 - k2
        assert row.realized <= row.d_enum
        assert row.b == max(k1, k2) - 1


def test_scan_frobenius():
    scan = gallery.scan_family("frobenius", [(2, 2, n) for n in range(1, 9)])
    assert [row.realized for row in scan.rows] == [4, 8, 16, 32, 64, 128, 256, 512]


def test_scan_rejects_del_pezzo():
    with pytest.raises(InvalidParameter):
        gallery.scan_family("del-pezzo", [(3,)])


def test_scan_respects_cap():
    from zariski.errors import EnumerationTooLarge
    with pytest.raises(EnumerationTooLarge):
        gallery.scan_family("collinear", [(10,)], max_subsets=5)


def test_witness_divisor_requires_family():
    with pytest.raises(InvalidParameter):
        gallery.witness_divisor("del-pezzo", gallery.build("del-pezzo:2"))
    assert bounds.negativity_bound(gallery.build("del-pezzo:2")) == 1

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from zariski import gallery
from zariski.cli import main, parse_divisor, parse_range
from zariski.errors import ParseError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_text(capsys):
    code, out, _ = run(capsys, "decompose", "--gallery", "collinear:5", "--divisor", "H+Lt")
    assert code == 0
    assert "N = 3/4·Lt, denominator 4" in out
    assert "det(S) = -4" in out


def test_decompose_nef(capsys):
    code, out, _ = run(capsys, "decompose", "--gallery", "collinear:5", "--divisor", "H")
    assert code == 0
    assert "nef; N = 0" in out


def test_decompose_json_and_oracle(capsys):
    code, out, _ = run(capsys, "decompose", "--gallery", "two-lines:4,5", "--divisor", "H+L1+L2", "--json", "--oracle")
    assert code == 0
    data = json.loads(out)
    assert data["denominator"] == 11
    assert data["N"] == [{"curve": "L1", "coeff": "6/11"}, {"curve": "L2", "coeff": "7/11"}]
    assert data["support"] == ["L1", "L2"] and data["det_support"] == 11
    assert data["oracle"] == "agree"
    # p/q strings round-trip exactly
    assert Fraction(data["P"][0]) == Fraction(20, 11)


def test_json_is_byte_deterministic(capsys):
    argv = ("decompose", "--gallery", "collinear:7", "--divisor", "2*H + Lt", "--json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "." not in "".join(json.loads(first)["P"])


def test_exit_codes(capsys):
    assert run(capsys, "decompose", "--gallery", "collinear:5", "--divisor=-H")[0] == 2
    code, _, err = run(capsys, "decompose", "--gallery", "collinear:5", "--divisor=-H")
    assert "not negative definite" in err or "P^2" in err
    assert run(capsys, "decompose", "--gallery", "collinear:5", "--divisor", "H+Q")[0] == 1
    assert run(capsys, "decompose", "--gallery", "bogus:1", "--divisor", "H")[0] == 1
    assert run(capsys, "bounds", "--gallery", "del-pezzo:8", "--max-subsets", "5000")[0] == 4
    assert run(capsys, "bounds", "--gallery", "collinear:5", "--max-subsets", "3")[0] == 4
    # argparse usage errors map to 1, not to the pseudo-effectivity code
    assert main(["decompose", "--gallery", "collinear:5"]) == 1


def test_oracle_limit_is_a_usage_error(capsys):
    code, _, err = run(capsys, "decompose", "--gallery", "del-pezzo:7", "--divisor", "H", "--oracle")
    assert code == 1 and "oracle limit" in err


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("collinear:5", {"b": 4, "d_enum": 4, "d_theorem": 1024}),
        ("two-lines:4,5", {"b": 4, "d_enum": 11, "b_theorem": 439084800}),
        ("del-pezzo:3", {"b": 1, "d_enum": 1}),
    ],
)
def test_bounds(capsys, spec, expected):
    code, out, _ = run(capsys, "bounds", "--gallery", spec, "--json")
    assert code == 0
    data = json.loads(out)
    for k, v in expected.items():
        assert data[k] == v
    assert set(data["checks"].values()) == {"PASS"}
    code, out, _ = run(capsys, "bounds", "--gallery", spec)
    assert "FAIL" not in out and f"d_enum = {expected['d_enum']}" in out


def test_scan_two_lines_csv(capsys):
    code, out, _ = run(capsys, "scan", "two-lines", "--k1", "4..6", "--k2", "5..9", "--coprime-only", "--csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows
    for row in rows:
        k1, k2 = int(row["k1"]), int(row["k2"])
        assert int(row["realized"]) == k1 * k2 - k1 - k2


def test_scan_frobenius_json(capsys):
    code, out, _ = run(capsys, "scan", "frobenius", "--p", "2", "--g", "2", "--n", "1..8", "--json")
    assert [r["realized"] for r in json.loads(out)["rows"]] == [4, 8, 16, 32, 64, 128, 256, 512]


def test_scan_collinear_text(capsys):
    code, out, _ = run(capsys, "scan", "collinear", "--r", "3..6")
    lines = out.strip().splitlines()
    assert lines[0].split() == ["r", "b", "d_enum", "realized", "delta_abs", "rho"]
    for line in lines[1:]:
        r, b, d, *_ = map(int, line.split())
        assert b == d == r - 1


def test_verify_round_trip_and_tampering(capsys, tmp_path):
    _, out, _ = run(capsys, "decompose", "--gallery", "two-lines:4,5", "--divisor", "H+L1+L2", "--json")
    good = tmp_path / "good.json"
    good.write_text(out)
    code, out, _ = run(capsys, "verify", "--gallery", "two-lines:4,5", str(good))
    assert code == 0 and "FAIL" not in out

    data = json.loads(good.read_text())
    data["P"][0] = "21/11"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--gallery", "two-lines:4,5", str(bad))
    assert code == 1 and "FAIL  orthogonality" in out

    data = json.loads(good.read_text())
    data["N"][0]["curve"] = "Q7"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--gallery", "two-lines:4,5", str(bad))
    assert code == 1 and "FAIL  registry" in out

    bad.write_text("{not json")
    assert run(capsys, "verify", "--gallery", "two-lines:4,5", str(bad))[0] == 1


def test_verify_without_d_field(capsys, tmp_path):
    _, out, _ = run(capsys, "decompose", "--gallery", "collinear:5", "--divisor", "H+Lt", "--json")
    data = json.loads(out)
    del data["D"]
    path = tmp_path / "z.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--gallery", "collinear:5", str(path), "--divisor", "H+Lt")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--gallery", "collinear:5", str(path), "--divisor", "H")
    assert code == 1 and "FAIL  sum" in out


def test_gallery_and_validate(capsys, tmp_path):
    path = tmp_path / "x.json"
    assert run(capsys, "gallery", "del-pezzo:4", "--out", str(path))[0] == 0
    assert run(capsys, "validate", "--surface", str(path))[1] == "valid\n"
    data = json.loads(path.read_text())
    data["gram"][0][0] = -1
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "validate", "--surface", str(path))
    assert code == 1 and "signature" in out
    # loading an invalid model for any other verb is a parse/validation failure
    assert run(capsys, "decompose", "--surface", str(path), "--divisor", "H")[0] == 1
    assert run(capsys, "validate", "--surface", str(tmp_path / "missing.json"))[0] == 1


def test_decompose_surface_file(capsys, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "gallery", "collinear:5", "--out", str(path))
    code, out, _ = run(capsys, "decompose", "--surface", str(path), "--divisor", "H + Lt")
    assert code == 0 and "3/4·Lt" in out


def test_parse_divisor():
    X = gallery.build("collinear:3")
    assert parse_divisor(X, "H+Lt") == (2, -1, -1, -1)
    assert parse_divisor(X, "2*H - E1 - E2") == (2, -1, -1, 0)
    assert parse_divisor(X, " 3 Lt ") == (3, -3, -3, -3)
    assert parse_divisor(X, "-E1") == (0, -1, 0, 0)
    for bad in ["", "H +", "H Lt", "2*", "H + Foo", "1/2*H", "H + *E1"]:
        with pytest.raises(ParseError):
            parse_divisor(X, bad)


def test_parse_range():
    assert parse_range("3..5") == [3, 4, 5]
    assert parse_range("4,7") == [4, 7]
    assert parse_range("2") == [2]
    with pytest.raises(ParseError):
        parse_range("a..b")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "zariski", "decompose", "--gallery", "frobenius:2,2,1", "--divisor", "F2+G"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "N = 3/4·G, denominator 4" in proc.stdout

"""Command-line interface.

Exit codes: 0 success, 1 parse/usage/validation error, 2 divisor not
pseudo-effective, 3 engine and oracle disagree, 4 enumeration over the cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from . import bounds, gallery, surface
from .decomposition import ZariskiDecomposition, decompose, decompose_oracle, verify
from .errors import (
    EnumerationTooLarge,
    InvalidParameter,
    NotPseudoEffective,
    OracleLimitExceeded,
    ParseError,
    ValidationError,
)
from .linalg import det, principal_submatrix

EXIT_PARSE = 1
EXIT_NOT_PSEF = 2
EXIT_ORACLE = 3
EXIT_ENUMERATION = 4


class CLIError(Exception):
    def __init__(self, message, code=EXIT_PARSE):
        super().__init__(message)
        self.code = code


# -- divisor expressions --------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(\*)?\s*([A-Za-z_][A-Za-z0-9_]*)\s*")


def parse_divisor(X: surface.SurfaceModel, text: str) -> tuple[int, ...]:
    """Resolve ``"2*H - E1 - E2"`` style text against basis and curve names."""
    names: dict[str, tuple[int, ...]] = {}
    for c in X.curves:
        names[c.name] = c.cls
    for i, b in enumerate(X.basis_names):
        names[b] = tuple(int(i == j) for j in range(X.rank))
    if not text.strip():
        raise ParseError("empty divisor expression")
    D = [0] * X.rank
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse divisor at column {pos + 1}: {text[pos:]!r}")
        sign, coeff, star, name = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing '+' or '-' before {name!r} at column {m.start() + 1}")
        if star and coeff is None:
            raise ParseError(f"dangling '*' at column {m.start() + 1}")
        if name not in names:
            raise ParseError(f"unknown name {name!r}; known: {', '.join(sorted(names))}")
        c = int(coeff) if coeff else 1
        if sign == "-":
            c = -c
        for k, x in enumerate(names[name]):
            D[k] += c * x
        pos = m.end()
        first = False
    return tuple(D)


# -- rendering --------------------------------------------------------------------

def fmt(q) -> str:
    q = Fraction(q)
    return str(q)


def render_class(X: surface.SurfaceModel, v) -> str:
    parts = []
    for name, x in zip(X.basis_names, v):
        x = Fraction(x)
        if x == 0:
            continue
        mag = abs(x)
        term = name if mag == 1 else f"{fmt(mag)}·{name}"
        parts.append(("- " if x < 0 else "+ ") + term)
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[1:]


def decomposition_json(X, D, Z: ZariskiDecomposition) -> dict:
    S = principal_submatrix(X.curve_matrix, Z.support)
    return {
        "surface": X.name,
        "D": list(D),
        "P": [fmt(x) for x in Z.positive],
        "N": [{"curve": X.curves[i].name, "coeff": fmt(a)} for i, a in Z.negative],
        "denominator": Z.denominator,
        "support": [X.curves[i].name for i in Z.support],
        "det_support": det(S),
    }


def decomposition_from_json(X: surface.SurfaceModel, data: dict):
    """Parse a decomposition file.  Returns ``(D or None, Z, problems)``.

    Curve names not in the registry are reported as problems rather than
    raised, so ``verify`` can print them as failures.
    """
    if not isinstance(data, dict):
        raise ParseError("decomposition: expected an object")
    for key in ("P", "N", "denominator"):
        if key not in data:
            raise ParseError(f"decomposition: missing field {key!r}")
    try:
        P = tuple(Fraction(x) for x in data["P"])
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError("decomposition: P entries must be 'p/q' strings") from None
    negative = []
    problems = []
    for k, entry in enumerate(data["N"]):
        if not isinstance(entry, dict) or "curve" not in entry or "coeff" not in entry:
            raise ParseError(f"decomposition: N[{k}] needs 'curve' and 'coeff'")
        try:
            a = Fraction(entry["coeff"])
        except (TypeError, ValueError, ZeroDivisionError):
            raise ParseError(f"decomposition: N[{k}].coeff is not 'p/q'") from None
        try:
            negative.append((X.curve_index(entry["curve"]), a))
        except KeyError:
            problems.append(f"curve {entry['curve']!r} is not registered on {X.name}")
    negative.sort()
    d = data["denominator"]
    if not isinstance(d, int) or isinstance(d, bool):
        raise ParseError("decomposition: denominator must be an integer")
    D = None
    if "D" in data:
        D = tuple(data["D"])
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in D):
            raise ParseError("decomposition: D must be a list of integers")
    return D, ZariskiDecomposition(P, tuple(negative), d), problems


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- model loading ------------------------------------------------------------------

def _model(args, check=True) -> surface.SurfaceModel:
    try:
        if args.gallery:
            return gallery.build(args.gallery)
        if args.surface:
            return surface.load(args.surface, check=check)
    except InvalidParameter as exc:
        raise CLIError(str(exc)) from None
    except OSError as exc:
        raise CLIError(f"cannot read {args.surface}: {exc.strerror}") from None
    raise CLIError("give --surface PATH or --gallery SPEC")


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------

def cmd_decompose(args) -> int:
    X = _model(args)
    D = parse_divisor(X, args.divisor)
    try:
        Z = decompose(X, D)
    except NotPseudoEffective as exc:
        raise CLIError(f"not pseudo-effective: {exc} [{exc.witness}]", EXIT_NOT_PSEF) from None
    if args.oracle:
        try:
            Z2 = decompose_oracle(X, D, limit=args.oracle_limit)
        except OracleLimitExceeded as exc:
            raise CLIError(str(exc)) from None
        except NotPseudoEffective:
            raise CLIError("oracle found no decomposition but the engine did", EXIT_ORACLE) from None
        if Z2 != Z:
            raise CLIError("engine and oracle disagree", EXIT_ORACLE)
    data = decomposition_json(X, D, Z)
    if args.oracle:
        data["oracle"] = "agree"
    if args.json:
        _emit(_dump_json(data), args.out)
        return 0
    lines = [f"surface: {X.name}", f"D = {render_class(X, D)}"]
    if not Z.negative:
        lines.append("nef; N = 0")
    else:
        terms = " + ".join(f"{fmt(a)}·{X.curves[i].name}" for i, a in Z.negative)
        lines.append(f"N = {terms}, denominator {Z.denominator}")
    lines.append(f"P = {render_class(X, Z.positive)}")
    if Z.negative:
        lines.append(f"support = {{{', '.join(data['support'])}}}, det(S) = {data['det_support']}")
    if args.oracle:
        lines.append("oracle: agree")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _bounds_report(X, max_subsets):
    try:
        sb = bounds.surface_bounds(X, max_subsets=max_subsets)
    except EnumerationTooLarge as exc:
        raise CLIError(f"{exc} (raise --max-subsets)", EXIT_ENUMERATION) from None
    realized = 1
    for i in range(len(X.curves)):
        D, predicted = bounds.realize_denominator(X, i)
        actual = decompose(X, D).denominator
        if actual != predicted:
            raise CLIError(f"realized denominator mismatch on {X.curves[i].name}: {actual} != {predicted}")
        realized = max(realized, actual)
    checks = {
        "d_lower <= d_enum": realized <= sb.d_enum,
        "d_enum <= b^(rho-1)": sb.d_enum <= sb.d_theorem,
        "b <= d*d!*|Delta|": sb.b <= sb.b_theorem,
    }
    return sb, realized, checks


def cmd_bounds(args) -> int:
    X = _model(args)
    sb, realized, checks = _bounds_report(X, args.max_subsets)
    ok = all(checks.values())
    if args.json:
        data = {
            "surface": X.name,
            "b": sb.b,
            "rho": sb.rho,
            "delta_abs": sb.delta_abs,
            "d_enum": sb.d_enum,
            "d_lower": realized,
            "d_theorem": sb.d_theorem,
            "b_theorem": sb.b_theorem,
            "checks": {k: ("PASS" if v else "FAIL") for k, v in checks.items()},
        }
        _emit(_dump_json(data), args.out)
    else:
        lines = [
            f"surface: {X.name}",
            f"b = {sb.b}",
            f"rho = {sb.rho}",
            f"|Delta| = {sb.delta_abs}",
            f"d_enum = {sb.d_enum}",
            f"d_lower = {realized}",
            f"b^(rho-1) = {sb.d_theorem}",
            f"d*d!*|Delta| = {sb.b_theorem}",
        ]
        lines += [f"{'PASS' if v else 'FAIL'}  {k}" for k, v in checks.items()]
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def parse_range(text: str) -> list[int]:
    """``"3..12"`` (inclusive) or ``"4,7,9"`` or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"bad range {text!r}; use A..B or a comma list") from None


def cmd_scan(args) -> int:
    fam = args.family
    if fam == "collinear":
        params = [(r,) for r in parse_range(args.r or "3..12")]
    elif fam == "two-lines":
        k1s = parse_range(args.k1 or "4..5")
        k2s = parse_range(args.k2 or "5..7")
        if args.coprime_only:
            params = gallery.coprime_pairs(k1s, k2s)
        else:
            params = [(a, b) for a in k1s for b in k2s]
    else:
        params = [(p, g, n) for p in parse_range(args.p or "2")
                  for g in parse_range(args.g or "2") for n in parse_range(args.n or "1..8")]
    try:
        scan = gallery.scan_family(fam, params, max_subsets=args.max_subsets)
    except InvalidParameter as exc:
        raise CLIError(str(exc)) from None
    except EnumerationTooLarge as exc:
        raise CLIError(f"{exc} (raise --max-subsets)", EXIT_ENUMERATION) from None
    rows = [list(r.params) + [r.b, r.d_enum, r.realized, r.delta_abs, r.rho] for r in scan.rows]
    if args.json:
        data = {"family": fam, "columns": list(scan.columns),
                "rows": [dict(zip(scan.columns, row)) for row in rows]}
        _emit(_dump_json(data), args.out)
    elif args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(scan.columns)
        w.writerows(rows)
        _emit(buf.getvalue(), args.out)
    else:
        cells = [list(scan.columns)] + [[str(x) for x in row] for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
        text = "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)
        _emit(text + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    X = _model(args)
    try:
        with open(args.decomposition, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CLIError(f"cannot read {args.decomposition}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(f"{args.decomposition}: line {exc.lineno}: {exc.msg}") from None
    D, Z, problems = decomposition_from_json(X, data)
    if args.divisor:
        D = parse_divisor(X, args.divisor)
    if len(Z.positive) != X.rank:
        raise CLIError(f"P has {len(Z.positive)} entries, model rank is {X.rank}")
    if D is None:
        # without D the sum condition is vacuous; check the rest
        D = tuple(p + n for p, n in zip(Z.positive, Z.negative_class(X)))
    groups = {
        "registry": list(problems),
        "sum": [], "nef": [], "negative definite": [], "orthogonality": [],
        "effective": [], "support bound": [], "denominator": [],
    }
    if not problems:
        for v in verify(X, D, Z):
            groups.setdefault(v.invariant, []).append(v.detail)
    ok = not any(groups.values())
    if args.json:
        out = {k: ("FAIL" if v else "PASS") for k, v in groups.items()}
        out["details"] = {k: v for k, v in groups.items() if v}
        _emit(_dump_json(out), args.out)
    else:
        lines = []
        for k, v in groups.items():
            lines.append(f"{'FAIL' if v else 'PASS'}  {k}" + (f": {'; '.join(v)}" if v else ""))
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def cmd_gallery(args) -> int:
    try:
        X = gallery.build(args.spec)
    except InvalidParameter as exc:
        raise CLIError(str(exc)) from None
    _emit(surface.dumps(X), args.out)
    return 0


def cmd_validate(args) -> int:
    X = _model(args, check=False)
    problems = surface.validate(X)
    if args.json:
        _emit(_dump_json({"surface": X.name, "valid": not problems,
                          "violations": [str(p) for p in problems]}), args.out)
    else:
        text = "valid\n" if not problems else "".join(f"FAIL  {p}\n" for p in problems)
        _emit(text, args.out)
    return 0 if not problems else 1


# -- argument parsing -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 means "not pseudo-effective" here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zariski", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--surface", metavar="PATH", help="surface JSON file")
        g.add_argument("--gallery", metavar="SPEC", help="e.g. collinear:5, two-lines:4,5")

    def output_args(p, csv_ok=False):
        fmt_group = p.add_mutually_exclusive_group()
        fmt_group.add_argument("--json", action="store_true")
        if csv_ok:
            fmt_group.add_argument("--csv", action="store_true")
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("decompose", help="Zariski decomposition of a divisor")
    model_args(p)
    p.add_argument("--divisor", required=True, help='e.g. "H + Lt" or "2*H - E1 - E2"')
    p.add_argument("--oracle", action="store_true", help="cross-check with the subset oracle")
    p.add_argument("--oracle-limit", type=int, default=16)
    output_args(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bounds", help="negativity and denominator bounds")
    model_args(p)
    p.add_argument("--max-subsets", type=int, default=bounds.DEFAULT_MAX_SUBSETS)
    output_args(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scan", help="tabulate a family")
    p.add_argument("family", choices=["collinear", "two-lines", "frobenius"])
    p.add_argument("--r")
    p.add_argument("--k1")
    p.add_argument("--k2")
    p.add_argument("--coprime-only", action="store_true")
    p.add_argument("--p")
    p.add_argument("--g")
    p.add_argument("--n")
    p.add_argument("--max-subsets", type=int, default=bounds.DEFAULT_MAX_SUBSETS)
    output_args(p, csv_ok=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="check a decomposition file")
    model_args(p)
    p.add_argument("decomposition", metavar="DECOMPOSITION_JSON")
    p.add_argument("--divisor", help="check D = P + N against this divisor")
    output_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gallery", help="write a gallery model as JSON")
    p.add_argument("spec")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("validate", help="check surface model invariants")
    model_args(p)
    output_args(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

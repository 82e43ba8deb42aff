"""``htz``: command-line front end.

Every subcommand prints one JSON document (or CSV / plain text with
``--format``).  Exit status: 0 success, 1 domain error or failed
verification suite, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import commutant as cm
from .errors import HtzError
from .exactmath import format_rational
from .operators import (
    apply,
    basis_label,
    commutator,
    compose,
    is_toeplitz,
    nonzero_witness,
    operator_for,
)
from .symbols import mellin_eval, mellin_quadrature, parse_radial
from .verify import SUITES, run_grid, verify_monomial_small_degree

DEFAULT_K = 40

REQUIRED = {
    "mellin": ("symbol", "z"),
    "parse": ("symbol",),
    "apply": ("p", "q", "symbol"),
    "matrix": ("symbol",),
    "product": ("left_phi", "right_phi"),
    "commutator": ("left_phi", "right_phi"),
    "blocks": ("p", "s", "m"),
    "ray": ("p", "s", "m"),
    "commutant": ("p", "s", "m"),
    "classify": ("p", "s", "m"),
    "verify": ("suite",),
}


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.replace("−", "-"))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="angular degree of the (left) symbol")
    common.add_argument("--s", type=int, help="angular degree of the right / commuting symbol")
    common.add_argument("--m", type=int, help="m in n = (2m+1)p")
    common.add_argument("--q", type=int, help="signed basis index: q>=0 is z^q, q<0 is zbar^-q")
    common.add_argument("--K", type=int, help=f"truncation bound (default {DEFAULT_K})")
    common.add_argument("--z", type=_rational, help="Mellin argument")
    common.add_argument("--alpha", type=_rational, help="monomial exponent for th6 checks")
    common.add_argument("--symbol", help='radial symbol, e.g. "2*r^3 - 1/2*r^{1/2}"')
    common.add_argument("--left-phi", dest="left_phi", help="radial part of the left operator")
    common.add_argument("--right-phi", dest="right_phi", help="radial part of the right operator")
    common.add_argument("--suite", help=f"one of: {', '.join(sorted(SUITES))}")
    common.add_argument("--p-max", dest="p_max", type=int)
    common.add_argument("--m-max", dest="m_max", type=int)
    common.add_argument("--q-max", dest="q_max", type=int)
    common.add_argument("--tol", type=_positive_float, help="also run the quadrature oracle")
    common.add_argument("--check-toeplitz", dest="check_toeplitz", action="store_true")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--out", help="output path (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="htz", description="Exact calculus for quasihomogeneous Toeplitz operators "
                                "on the harmonic Bergman space.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    helps = {
        "mellin": "exact Mellin transform of a radial symbol",
        "parse": "canonicalize a radial symbol",
        "apply": "image of one basis vector",
        "matrix": "truncated matrix of T_{e^{ip theta} symbol}",
        "product": "matrix of T_left T_right, optionally tested for Toeplitz-ness",
        "commutator": "commutator of two quasihomogeneous operators",
        "blocks": "blocks A, B, C of the commutant system",
        "ray": "partial-fraction weights of the Gamma-ratio function",
        "commutant": "solve for commuting radial parts",
        "classify": "published trivial/exists prediction",
        "verify": "run a verification suite",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    for name in REQUIRED[args.command]:
        if getattr(args, name) is None:
            flag = "--" + name.replace("_", "-")
            parser.error(f"{args.command}: missing required flag {flag}")
    if args.K is not None and args.K < 0:
        parser.error("--K must be nonnegative")
    args.K_given = args.K is not None
    if args.K is None:
        args.K = DEFAULT_K


def _matrix_table(M) -> list[dict]:
    return M.to_json()["entries"]


def cmd_mellin(a):
    f = parse_radial(a.symbol)
    out = {"symbol": f.render(), "z": format_rational(a.z), "value": format_rational(mellin_eval(f, a.z))}
    if a.tol is not None:
        out["quadrature"] = mellin_quadrature(f, float(a.z), a.tol)
        out["tol"] = a.tol
    return out, None


def cmd_parse(a):
    f = parse_radial(a.symbol)
    return {"symbol": f.render(), "terms": f.to_json()}, f.to_json()


def cmd_apply(a):
    f = parse_radial(a.symbol)
    row, value = apply(a.p, f, a.q)
    return {"p": a.p, "q": a.q, "row": row, "value": format_rational(value),
            "input": basis_label(a.q), "output": basis_label(row)}, None


def cmd_matrix(a):
    M = operator_for(a.p or 0, parse_radial(a.symbol), a.K)
    return M.to_json(), _matrix_table(M)


def _pair(a):
    left = operator_for(a.p or 0, parse_radial(a.left_phi), a.K)
    right = operator_for(a.s or 0, parse_radial(a.right_phi), a.K)
    return left, right


def cmd_product(a):
    left, right = _pair(a)
    M = compose(left, right)
    out = {"matrix": M.to_json()}
    if a.check_toeplitz:
        candidates = [parse_radial(a.symbol)] if a.symbol else []
        out["toeplitz"] = is_toeplitz(M, candidates).to_json()
    return out, _matrix_table(M)


def cmd_commutator(a):
    left, right = _pair(a)
    M = commutator(left, right)
    w = nonzero_witness(M)
    out = {"matrix": M.to_json(), "zero_on_exact_region": w is None,
           "witness": None if w is None else {"row": w[0], "col": w[1], "value": format_rational(w[2])}}
    return out, _matrix_table(M)


def cmd_blocks(a):
    sys_ = cm.build_blocks(a.p, a.s, a.m)
    out = sys_.to_json()
    out["identities_hold"] = cm.check_block_identities(sys_)
    out["rankAB"] = cm.rank(sys_.AB)
    table = [{"block": name, "k": k, "j": j, "value": v}
             for name, mat, k0 in (("A", sys_.A, 0), ("B", sys_.B, a.s), ("C", sys_.C, a.p))
             for k, row in enumerate(mat.to_lists(), start=k0)
             for j, v in enumerate(row)]
    return out, table


def cmd_ray(a):
    ray = cm.partial_fraction_ray(a.p, a.s, a.m)
    out = ray.to_json()
    table = [{"j": j, "pole": p, "weight": w} for j, (p, w) in enumerate(zip(out["poles"], out["weights"]))]
    return out, table


def cmd_commutant(a):
    res = cm.solve_commutant(a.p, a.s, a.m, a.K)
    return res.to_json(), None


def cmd_classify(a):
    return {"p": a.p, "s": a.s, "m": a.m, "prediction": cm.classify_th7(a.p, a.s, a.m).value}, None


def cmd_verify(a):
    if a.suite == "th6" and a.alpha is not None:
        if a.p is None or a.s is None:
            raise HtzError("verify --suite th6 --alpha needs --p and --s")
        return verify_monomial_small_degree(a.p, a.s, a.alpha, a.K), None
    cfg = {"suite": a.suite, "p_max": a.p_max, "m_max": a.m_max, "q_max": a.q_max}
    if a.K_given:
        cfg["K"] = a.K
    report = run_grid(cfg)
    return report, None


COMMANDS = {
    "mellin": cmd_mellin, "parse": cmd_parse, "apply": cmd_apply, "matrix": cmd_matrix,
    "product": cmd_product, "commutator": cmd_commutator, "blocks": cmd_blocks,
    "ray": cmd_ray, "commutant": cmd_commutant, "classify": cmd_classify, "verify": cmd_verify,
}


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _csv(payload: dict, table: Optional[list]) -> str:
    rows = table if table is not None else [payload]
    columns: list[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    if table is None:
        columns.sort()
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _scalar(v) for k, v in row.items()})
    return buf.getvalue()


def _flat(v: Any) -> bool:
    return not isinstance(v, (dict, list)) or (
        isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v))


def _inline(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return _scalar(v)


def _pretty(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if _flat(v):
                lines.append(f"{pad}{k}: {_inline(v)}")
            else:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            f"{pad}- {_inline(x)}" if _flat(x) else f"{pad}-\n{_pretty(x, indent + 1)}"
            for x in obj)
    return f"{pad}{_scalar(obj)}"


def render(result, table, fmt: str) -> str:
    from .verify import GridReport

    if isinstance(result, GridReport):
        if fmt == "json":
            return _dumps(result.to_dict())
        if fmt == "csv":
            return result.to_csv()
        head = (f"suite {result.suite}: {'PASS' if result.passed else 'FAIL'} "
                f"({result.cases_run} cases, {len(result.failures)} failures, "
                f"{result.wall_time:.2f}s)")
        body = [f"  FAIL {json.dumps(p, sort_keys=True)}: {w}" for p, w in result.failures]
        return "\n".join([head] + body) + "\n"
    if fmt == "json":
        return _dumps(result)
    if fmt == "csv":
        return _csv(result, table)
    return _pretty(result) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        result, table = COMMANDS[args.command](args)
    except HtzError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1

    text = render(result, table, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if getattr(result, "passed", True) is False:
        sys.stderr.write(json.dumps({"error": "SuiteFailed", "suite": result.suite,
                                     "failures": len(result.failures)}, sort_keys=True) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

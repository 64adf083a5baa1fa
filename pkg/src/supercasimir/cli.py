"""Command line front end.

Exit codes: 0 every check passed, 1 some check left a nonzero residual,
2 the input could not be used.  A JSON report goes to stdout in every case
(and to ``--json FILE`` when given).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .algebra import (
    SuperAlgebra,
    builtin,
    compute_h_rho,
    load_algebra,
    rho_shift_residuals,
    root_decomposition,
    validate_algebra,
    weight_str,
)
from .errors import InputError, SchemaError
from .exact import as_fraction, fraction_str
from .invariants import verify_anti_invariant, verify_central, verify_even_central
from .parser import eval_expr, lagrange_bindings, to_text, parse_expr
from .report import jsonable
from .representations import (
    EvaluationModule,
    Representation,
    act_uea,
    adjoint_module,
    all_hwv,
    check_gelfand_sum,
    check_hwv_stability,
    check_operator_stability,
    find_even_hwv,
    find_hwv,
    load_representation,
    natural_module,
    weight_spaces,
)

REPORT_VERSION = 1


def _csv_scalars(text: str) -> list:
    try:
        return [as_fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad number list {text!r}: {exc}") from None


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise SchemaError(f"bad integer list {text!r}") from None


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None


def _algebra(args) -> SuperAlgebra:
    if args.algebra:
        return load_algebra(_read_json(args.algebra))
    return builtin(args.builtin or "sl2")


def _factor(A: SuperAlgebra, spec: str) -> Representation:
    if spec == "natural":
        return natural_module(A)
    if spec == "adjoint":
        return adjoint_module(A)
    return load_representation(_read_json(spec), A, name=Path(spec).stem)


def _module(A: SuperAlgebra, args) -> EvaluationModule:
    factors, points = None, None
    if args.module:
        doc = _read_json(args.module)
        if not isinstance(doc, dict) or "factors" not in doc:
            raise SchemaError("module spec needs a 'factors' list")
        factors = list(doc["factors"])
        points = doc.get("points")
    if args.factors:
        factors = [f.strip() for f in args.factors.split(",") if f.strip()]
    if args.points:
        points = _csv_scalars(args.points)
    if not factors:
        raise SchemaError("no module factors given (use --factors or --module)")
    if points is None:
        points = list(range(1, len(factors) + 1))
    try:
        points = [as_fraction(p) for p in points]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad evaluation point: {exc}") from None
    return EvaluationModule([_factor(A, f) for f in factors], points)


def _matrix_json(mat) -> list[list[str]]:
    return [[fraction_str(x) for x in row] for row in mat]


# -- subcommands ----------------------------------------------------------------------

def cmd_algebra(A: SuperAlgebra, args) -> tuple[list, bool]:
    if args.action == "validate":
        rep = validate_algebra(A)
        return [{"check": "validate", **rep.to_json()}], rep.passed
    R = root_decomposition(A)
    info = {
        "check": "info",
        "basis": [{"label": lab, "parity": "odd" if p else "even"} for lab, p in zip(A.labels, A.parity)],
        "cartan": [A.labels[h] for h in A.cartan],
        "form": [{"x": A.labels[i], "y": A.labels[j], "value": fraction_str(c)}
                 for (i, j), c in sorted(A.form_entries.items())],
        "positive_roots": [
            {
                "name": R.root_name(A, a),
                "weight": [fraction_str(x) for x in a],
                "parity": "odd" if R.parities[a] else "even",
                "multiplicity": R.multiplicities[a],
                "simple": a in R.simple_roots,
            }
            for a in R.positive_roots
        ],
        "h_rho": A.format_vec(compute_h_rho(A, R)),
        "rho_shift_residuals": {weight_str(a): fraction_str(v) for a, v in rho_shift_residuals(A, R).items()},
    }
    return [info], True


def _expressions(args) -> list[str]:
    if args.op:
        return [args.op]
    try:
        lines = Path(args.batch).read_text().splitlines()
    except OSError as exc:
        raise SchemaError(f"cannot read {args.batch}: {exc.strerror}") from None
    out = [ln.split("#", 1)[0].strip() for ln in lines]
    out = [ln for ln in out if ln]
    if not out:
        raise SchemaError(f"{args.batch} contains no expressions")
    return out


def cmd_verify(A: SuperAlgebra, args) -> tuple[list, bool]:
    bindings = {}
    if args.points:
        from .exact import lagrange_basis

        bindings = lagrange_bindings(lagrange_basis(_csv_scalars(args.points)))
    results, ok = [], True
    for text in _expressions(args):
        u = eval_expr(text, A, bindings, allow_small=args.allow_small)
        if args.mode == "central":
            rep = verify_central(u, A)
        elif args.mode == "even-central":
            rep = verify_even_central(u, A)
        else:
            rep = verify_anti_invariant(u, A)
        ok = ok and rep.passed
        results.append({"expression": to_text(parse_expr(text)), "mode": args.mode,
                        "element": str(u), **rep.to_json()})
    return results, ok


def cmd_module(A: SuperAlgebra, args) -> tuple[list, bool]:
    mod = _module(A, args)
    labels = [mod.basis_label(n) for n in range(mod.dimension)]
    head = {
        "check": args.action,
        "module": {
            "factors": [f.name for f in mod.factors],
            "points": [fraction_str(d) for d in mod.points],
            "dimension": mod.dimension,
            "basis": labels,
        },
    }
    if args.action == "act":
        if not args.op:
            raise SchemaError("module act needs --op")
        bindings = lagrange_bindings(mod.lagrange)
        u = eval_expr(args.op, A, bindings, allow_small=args.allow_small)
        return [{**head, "expression": to_text(parse_expr(args.op)), "element": str(u),
                 "matrix": _matrix_json(act_uea(u, mod))}], True
    if args.action == "weights":
        spaces = [{"weight": [fraction_str(x) for x in mu], "basis": [labels[n] for n in idx]}
                  for mu, idx in weight_spaces(mod).items()]
        return [{**head, "weight_spaces": spaces}], True
    if args.action == "hwv":
        if args.weight:
            mu = tuple(_csv_scalars(args.weight))
            if len(mu) != len(A.cartan):
                raise SchemaError(f"--weight needs {len(A.cartan)} coordinates")
            found = {mu: find_hwv(mod, mu)}
        else:
            found = all_hwv(mod)
        spaces = [{"weight": [fraction_str(x) for x in mu], "basis": jsonable(basis)} for mu, basis in found.items()]
        return [{**head, "hwv": spaces}], True
    if args.action == "even-hwv":
        found = find_even_hwv(mod)
        spaces = [{"weight": [fraction_str(x) for x in mu], "basis": jsonable(e["basis"]),
                   "S": {f"S_{k}": jsonable(m) for k, m in e["S"].items()}} for mu, e in found.items()]
        return [{**head, "even_hwv": spaces}], True
    if args.action == "stability":
        if args.op:
            u = eval_expr(args.op, A, lagrange_bindings(mod.lagrange), allow_small=args.allow_small)
            rep = check_operator_stability(act_uea(u, mod), mod, title=f"{to_text(parse_expr(args.op))} preserves highest weight vectors")
        else:
            if args.k is None or not args.tuple:
                raise SchemaError("module stability needs --k and --tuple (or --op)")
            rep = check_hwv_stability(args.k, _csv_ints(args.tuple), mod)
        return [{**head, **rep.to_json()}], rep.passed
    if args.action == "gelfand-sum":
        if args.k is None:
            raise SchemaError("module gelfand-sum needs --k")
        rep = check_gelfand_sum(args.k, mod)
        return [{**head, **rep.to_json()}], rep.passed
    raise SchemaError(f"unknown module action {args.action!r}")


# -- plumbing ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supercasimir", description="Exact Casimir and anticenter checks for Lie superalgebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--builtin", help="sl2 | gl11 | osp12 | gl:M,N")
        src.add_argument("--algebra", metavar="FILE", help="algebra JSON document")
        p.add_argument("--json", metavar="OUT", help="also write the report to OUT")

    p_alg = sub.add_parser("algebra", help="describe or validate an algebra")
    p_alg.add_argument("action", choices=["info", "validate"])
    common(p_alg)

    p_ver = sub.add_parser("verify", help="check an operator expression")
    common(p_ver)
    grp = p_ver.add_mutually_exclusive_group(required=True)
    grp.add_argument("--op", help="operator expression")
    grp.add_argument("--batch", metavar="FILE", help="one expression per line, '#' comments")
    p_ver.add_argument("--mode", choices=["central", "even-central", "anti"], default="central")
    p_ver.add_argument("--points", help="evaluation points d1,...,dn binding p1..pn")
    p_ver.add_argument("--allow-small", action="store_true", help="permit D[l] on gl(M,N) with M+N < 3")

    p_mod = sub.add_parser("module", help="evaluation-module computations")
    p_mod.add_argument("action", choices=["act", "weights", "hwv", "even-hwv", "stability", "gelfand-sum"])
    common(p_mod)
    p_mod.add_argument("--factors", help="comma list of natural | adjoint | FILE.json")
    p_mod.add_argument("--module", metavar="FILE", help='{"factors": [...], "points": [...]}')
    p_mod.add_argument("--points", help="evaluation points d1,...,dn (default 1..n)")
    p_mod.add_argument("--weight", help="weight coordinates on the Cartan basis")
    p_mod.add_argument("--k", type=int)
    p_mod.add_argument("--tuple", help="1-based indices j1,...,jk into the points")
    p_mod.add_argument("--op", help="operator expression (act, stability)")
    p_mod.add_argument("--allow-small", action="store_true")
    return parser


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    sys.stdout.write(text)
    if getattr(args, "json", None):
        Path(args.json).write_text(text)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    report: dict = {"version": REPORT_VERSION, "command": argv}
    try:
        A = _algebra(args)
        report["algebra"] = {"name": A.name, "fingerprint": A.fingerprint()}
        handler = {"algebra": cmd_algebra, "verify": cmd_verify, "module": cmd_module}[args.command]
        results, ok = handler(A, args)
    except (InputError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        report.update({"status": "error", "error": str(msg)})
        print(f"error: {msg}", file=sys.stderr)
        _emit(report, args)
        return 2
    report["results"] = results
    report["status"] = "pass" if ok else "fail"
    _emit(report, args)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver: define/inspect algebras, run identity checks, compute
identity spaces, certify simplicity, and emit the golden reproductions.

Exit codes: 0 success / identity holds / simple; 1 identity fails / not
simple; 2 usage or spec error; 3 inconclusive (window-limited).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

from . import algebras, idealtool
from .algebras import (Algebra, FiniteAlgebra, GradedAlgebra, builtin_algebra,
                       algebra_from_spec)
from .freepoly import DegreeOutOfRangeError, catalog_entry, parse
from .identcheck import (FAILS, HOLDS, INCONCLUSIVE, check_identity,
                         check_identity_windowed, degree3_system, evaluate,
                         identity_space, reference_deg4_report,
                         tortken_prime_relation, verify_reference_solutions)


class UsageError(Exception):
    pass


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}, expected lo..hi") from exc


_BUILTIN_PARAM_KEYS = ("p", "m", "N", "alpha", "beta", "dim", "char", "k", "l",
                       "seed", "variant", "lo", "hi")


def _build_algebra(args) -> Algebra:
    if getattr(args, "spec", None):
        try:
            with open(args.spec) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read algebra spec {args.spec}: {exc}")
        try:
            A = algebra_from_spec(spec)
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"bad algebra spec {args.spec}: {exc}")
    else:
        if not getattr(args, "builtin", None):
            raise UsageError("need --builtin NAME or --spec FILE")
        params = {}
        for key in _BUILTIN_PARAM_KEYS:
            val = getattr(args, key, None)
            if val is not None:
                params[key] = val
        if getattr(args, "window", None):
            params["lo"], params["hi"] = _parse_range(args.window)
        try:
            A = builtin_algebra(args.builtin, **params)
        except KeyError as exc:
            raise UsageError(f"builtin {args.builtin!r} needs parameter {exc}")
        except ValueError as exc:
            raise UsageError(str(exc))
    transform = getattr(args, "transform", None)
    if transform:
        A = {"plus": algebras.plus, "minus": algebras.minus,
             "opposite": algebras.opposite}[transform](A)
    return A


def _get_identity(args):
    if getattr(args, "identity", None):
        try:
            entry = catalog_entry(args.identity)
        except KeyError as exc:
            raise UsageError(str(exc))
        return entry.name, entry.poly, entry.excluded_chars
    if getattr(args, "expr", None):
        if not getattr(args, "vars", None):
            raise UsageError("--expr needs --vars a,b,c")
        variables = tuple(v.strip() for v in args.vars.split(","))
        try:
            return "<expr>", parse(args.expr, variables), frozenset()
        except ValueError as exc:
            raise UsageError(f"bad expression: {exc}")
    raise UsageError("need --identity NAME or --expr/--vars")


def _add_algebra_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", help="builtin algebra name")
    p.add_argument("--spec", help="JSON algebra spec file")
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--alpha", type=str)
    p.add_argument("--beta", type=str)
    p.add_argument("--dim", type=int)
    p.add_argument("--char", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--variant", type=str)
    p.add_argument("--window", type=str, help="graded window lo..hi")
    p.add_argument("--transform", choices=("plus", "minus", "opposite"))


def _emit(args, text_fn, json_obj) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(json_obj, indent=2, sort_keys=True))
    else:
        print(text_fn())


# -- subcommands ---------------------------------------------------------------

def cmd_algebra(args) -> int:
    A = _build_algebra(args)
    if args.action == "show":
        if isinstance(A, FiniteAlgebra):
            preds = A.predicates()
            fmt = lambda e: "-" if e is None else A.fmt_element(e)

            def text():
                lines = [f"algebra: {A.name} (dim {A.dim}, {A.field!r})"]
                if A.dim <= 16:
                    lines.append(A.table_text())
                lines += [f"commutative: {preds['is_commutative']}",
                          f"associative: {preds['is_associative']}",
                          f"left unit: {fmt(preds['left_unit'])}",
                          f"right unit: {fmt(preds['right_unit'])}",
                          f"unit: {fmt(preds['unit'])}"]
                return "\n".join(lines)

            payload = A.to_spec()
            payload["predicates"] = {
                k: (v if isinstance(v, bool) else fmt(v))
                for k, v in preds.items()}
            _emit(args, text, payload)
        else:
            def text():
                lines = [f"algebra: {A.name} (window {A.indices[0]}..{A.indices[-1]},"
                         f" {A.field!r})"]
                if len(A.indices) <= 16:
                    for i in A.indices:
                        for j in A.indices:
                            prod = {k: c for k, c in A.raw(i, j)}
                            lines.append(f"{A.label_fn(i)} * {A.label_fn(j)} = "
                                         f"{A.fmt_element(prod)}")
                return "\n".join(lines)

            _emit(args, text, {"name": A.name, "field": {"char": A.field.char},
                               "window": [A.indices[0], A.indices[-1]]})
        return 0
    return _validate_algebra(args, A)


_VALIDATION_TAGS = {
    "divided-power": [("assoc-commutative", ("commutativity", "associativity"))],
    "derivation-novikov": [("novikov", ("right_symmetric", "left_commutative"))],
    "derivation-symmetric": [("commutative", ("commutativity",)),
                             ("tortken", ("tortken",))],
    "osborn": [("novikov", ("right_symmetric", "left_commutative"))],
    "osborn-plus": [("commutative", ("commutativity",)),
                    ("tortken", ("tortken",))],
    "gametic": [("novikov", ("left_commutative", "associativity"))],
    "integration": [("leibniz-dual", ("leibniz_dual_left", "right_commutative"))],
    "square-product": [("commutative", ("commutativity",))],
    "p2-product": [("commutative", ("commutativity",)), ("tortken", ("tortken",))],
    "osborn-laurent": [("commutative", ("commutativity",)),
                       ("tortken", ("tortken",))],
    "osborn-bar": [("commutative", ("commutativity",))],
    "random-commutative": [("commutative", ("commutativity",))],
}


def _validate_algebra(args, A: Algebra) -> int:
    kind = args.builtin or "structure_constants"
    tags = list(_VALIDATION_TAGS.get(kind, [("commutative", ("commutativity",))]))
    if kind == "square-product":
        p, k, l = args.p, args.k, args.l
        if k == l or (p == 2 and l == k + 1):
            tags.append(("tortken", ("tortken",)))
    if kind == "osborn-laurent" and args.variant == "novikov":
        tags = [("novikov", ("right_symmetric", "left_commutative"))]
    ok = True
    for tag, idents in tags:
        failures = []
        for name in idents:
            poly = catalog_entry(name).poly
            if isinstance(A, FiniteAlgebra):
                out = check_identity(poly, A)
            else:
                out = check_identity_windowed(poly, A, A.indices)
            if out.verdict == FAILS:
                failures.append(name)
        if failures:
            ok = False
            print(f"{tag}: FAIL ({', '.join(failures)})")
        else:
            print(f"{tag}: OK")
    return 0 if ok else 1


def cmd_check(args) -> int:
    name, poly, excluded = _get_identity(args)
    A = _build_algebra(args)
    seed = args.seed if args.seed is not None else 0
    trials = args.trials
    if A.field.char in excluded:
        print(f"identity {name} is not applicable in characteristic "
              f"{A.field.char}")
        return 2
    if isinstance(A, GradedAlgebra):
        rng = (_parse_range(args.range) if args.range
               else (A.indices[0], A.indices[-1]))
        idx = [i for i in A.indices if rng[0] <= i <= rng[1]]
        out = check_identity_windowed(poly, A, idx)
        scope = f"range {rng[0]}..{rng[1]} (window-relative)"
    else:
        out = check_identity(poly, A, seed=seed, trials=trials)
        scope = "exhaustive"
    def text():
        lines = [f"identity: {name} | algebra: {A.name} | seed={seed} "
                 f"trials={trials}",
                 f"scope: {scope}",
                 f"verdict: {out.verdict} (checked {out.checked}, "
                 f"skipped {out.skipped})"]
        if out.caveat:
            lines.append(f"caveat: {out.caveat}")
        if out.witness is not None:
            for v in sorted(out.witness):
                lines.append(f"  {v} = {A.fmt_element(out.witness[v])}")
            lines.append(f"  value = {A.fmt_element(out.value)}")
        return "\n".join(lines)

    payload = {"identity": name, "algebra": A.name, "seed": seed,
               "trials": trials, "scope": scope}
    payload.update(out.to_json_dict(A))
    _emit(args, text, payload)
    return {HOLDS: 0, FAILS: 1, INCONCLUSIVE: 3}[out.verdict]


def cmd_idspace(args) -> int:
    if args.reference_deg4:
        report = reference_deg4_report()
        ok = verify_reference_solutions(report)

        def text():
            return report.to_text() + f"\nreference solutions verified: {ok}"

        payload = report.to_json_dict()
        payload["reference_verified"] = ok
        _emit(args, text, payload)
        return 0 if ok else 1
    if args.degree is None:
        raise UsageError("need --degree N or --reference-deg4")
    if not 1 <= args.degree <= 5:
        raise UsageError(f"identity spaces support degree 1..5, got {args.degree}")
    A = _build_algebra(args)
    if isinstance(A, GradedAlgebra):
        if not args.range:
            raise UsageError("graded identity space needs --range lo..hi")
        lo, hi = _parse_range(args.range)
        idx = [i for i in A.indices if lo <= i <= hi]
    else:
        idx = list(range(A.dim))
    subs = [tuple(A.basis(i) for i in tup)
            for tup in itertools.product(idx, repeat=args.degree)]
    report = identity_space(args.degree, A, subs, order=args.basis)
    _emit(args, lambda: report.to_text(), report.to_json_dict())
    return 0


def cmd_simplicity(args) -> int:
    A = _build_algebra(args)
    if not isinstance(A, FiniteAlgebra):
        raise UsageError("simplicity certification needs a finite algebra")
    cert = idealtool.certify_simplicity(A)

    def text():
        lines = [f"algebra: {A.name}", f"verdict: {cert.verdict}"]
        if cert.witness is not None:
            lines.append(f"witness ideal dimension: {cert.witness.dim}")
            for e in cert.witness.basis_elements():
                lines.append(f"  {A.fmt_element(e)}")
        lines += [f"audit: {line}" for line in cert.audit]
        return "\n".join(lines)

    _emit(args, text, cert.to_json_dict())
    return 0 if cert.simple else 1


def _reproduce_deg4_matrix() -> str:
    report = reference_deg4_report()
    ok = verify_reference_solutions(report)
    return report.to_text() + f"\nreference solutions verified: {ok}"


def _reproduce_det54() -> str:
    sys3 = degree3_system()
    lines = ["degree-3 substitution system (rows (i+j+2, j+s+2, s+i+2) for"
             " (i,j,s) = (1,2,3),(2,3,1),(3,1,2)):",
             sys3.matrix.to_text(),
             f"|det| = {sys3.abs_det}",
             "char-3 system ((i,j,s) = (1,1,0),(1,0,1),(0,1,1)):",
             sys3.char3_matrix.to_text(),
             f"nonsingular over F3: {sys3.char3_nonsingular}"]
    return "\n".join(lines)


def _reproduce_counterexample() -> str:
    A = algebras.square_product(3, 0, 1, 2)
    sigma = {"a": A.basis(0), "b": A.basis(1), "c": A.basis(2), "d": A.basis(6)}
    val = evaluate(catalog_entry("tortken").poly, A, sigma)
    lines = [f"algebra: {A.name} (dim {A.dim}, F3)",
             "tortken(x^(0), x^(1), x^(2), x^(6)) = "
             f"{A.fmt_element(val)} = -x^(0) (mod 3)"]
    B = algebras.square_product(2, 0, 2, 4)
    out = check_identity(catalog_entry("tortken").poly, B)
    w = ", ".join(f"{v}={B.fmt_element(out.witness[v])}"
                  for v in sorted(out.witness))
    lines.append(f"algebra: {B.name} (dim {B.dim}, F2)")
    lines.append(f"tortken fails at {w}; value = {B.fmt_element(out.value)}")
    return "\n".join(lines)


def _reproduce_tortken_prime() -> str:
    lines = []
    for m in (1, 2):
        rel = tortken_prime_relation(m)
        lines.append(f"tortken_prime - 2*D^3(abcd) on divided_power(3,{m}): "
                     f"{rel.verdict} (checked {rel.checked})")
    O1 = algebras.divided_power(3, 1)
    A1 = algebras.derivation_symmetric(O1, algebras.standard_derivation(O1))
    O2 = algebras.divided_power(3, 2)
    A2 = algebras.derivation_symmetric(O2, algebras.standard_derivation(O2))
    tp = catalog_entry("tortken_prime").poly
    lines.append(f"tortken_prime alone on (3,1): "
                 f"{check_identity(tp, A1).verdict}")
    out = check_identity(tp, A2)
    w = ", ".join(f"{v}={A2.fmt_element(out.witness[v])}"
                  for v in sorted(out.witness))
    lines.append(f"tortken_prime alone on (3,2): {out.verdict} at {w}; "
                 f"value = {A2.fmt_element(out.value)}")
    return "\n".join(lines)


def _reproduce_simplicity_table() -> str:
    rows = []
    for (p, m) in ((3, 1), (5, 1), (3, 2)):
        for alpha in (0, 1, 2):
            for beta in (0, 1):
                A = algebras.plus(algebras.osborn(alpha, beta, p, m))
                cert = idealtool.certify_simplicity(A)
                extra = (f" witness dim {cert.witness.dim}"
                         if cert.witness is not None else "")
                rows.append(f"osborn-plus p={p} m={m} alpha={alpha} beta={beta}: "
                            f"{cert.verdict}{extra}")
    for (p, m) in ((3, 1), (5, 1), (3, 2)):
        for beta in (0, 1):
            B = algebras.osborn_bar_finite(beta, p, m)
            cert = idealtool.certify_simplicity(B)
            extra = (f" witness dim {cert.witness.dim}"
                     if cert.witness is not None else "")
            rows.append(f"osborn-bar p={p} m={m} beta={beta}: "
                        f"{cert.verdict}{extra}")
    return "\n".join(rows)


def _reproduce_psi() -> str:
    lines = ["cyclic sum psi({x^i,x^j},x^s) + cyc over [-6,6]^3:"]
    bad = 0
    for i in range(-6, 7):
        for j in range(-6, 7):
            for s in range(-6, 7):
                want = Fraction(2 if i + j + s == 1 else 0)
                if idealtool.psi_cyclic_char0(i, j, s) != want:
                    bad += 1
    lines.append(f"  equals 2*[i+j+s=1] everywhere: {bad == 0}")
    lines.append("char-3 values psi(x^(i), x^(9-i)) for m=2:")
    for i in range(1, 9):
        lines.append(f"  psi(x^({i}),x^({9 - i})) = "
                     f"{idealtool.psi_charp(3, 2, i, 9 - i)}")
    return "\n".join(lines)


_REPRODUCE = {
    "deg4-matrix": _reproduce_deg4_matrix,
    "det54": _reproduce_det54,
    "counterexample": _reproduce_counterexample,
    "tortken-prime": _reproduce_tortken_prime,
    "simplicity-table": _reproduce_simplicity_table,
    "psi": _reproduce_psi,
}


def cmd_reproduce(args) -> int:
    print(_REPRODUCE[args.target]())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tortken",
        description="exact computer algebra for tortken / novikov-jordan algebras")
    sub = ap.add_subparsers(dest="command", required=True)

    p_alg = sub.add_parser("algebra", help="show or validate an algebra")
    p_alg.add_argument("action", choices=("show", "validate"))
    _add_algebra_flags(p_alg)
    p_alg.add_argument("--format", choices=("text", "json"), default="text")
    p_alg.set_defaults(fn=cmd_algebra)

    p_chk = sub.add_parser("check", help="check an identity on an algebra")
    p_chk.add_argument("--identity", help="catalog identity name")
    p_chk.add_argument("--expr", help="identity expression")
    p_chk.add_argument("--vars", help="comma-separated variables for --expr")
    _add_algebra_flags(p_chk)
    p_chk.add_argument("--range", help="basis index range lo..hi (graded)")
    p_chk.add_argument("--trials", type=int, default=64)
    p_chk.add_argument("--format", choices=("text", "json"), default="text")
    p_chk.set_defaults(fn=cmd_check)

    p_ids = sub.add_parser("idspace", help="multilinear identity space")
    p_ids.add_argument("--reference-deg4", action="store_true",
                       help="emit the stored degree-4 reproduction")
    p_ids.add_argument("--degree", type=int)
    p_ids.add_argument("--basis", choices=("canonical", "balanced_first"),
                       default="canonical")
    _add_algebra_flags(p_ids)
    p_ids.add_argument("--range", help="substitution index range lo..hi")
    p_ids.add_argument("--format", choices=("text", "json"), default="text")
    p_ids.set_defaults(fn=cmd_idspace)

    p_simp = sub.add_parser("simplicity", help="certify simplicity")
    _add_algebra_flags(p_simp)
    p_simp.add_argument("--format", choices=("text", "json"), default="text")
    p_simp.set_defaults(fn=cmd_simplicity)

    p_rep = sub.add_parser("reproduce", help="emit golden reproductions")
    p_rep.add_argument("target", choices=sorted(_REPRODUCE))
    p_rep.set_defaults(fn=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegreeOutOfRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())

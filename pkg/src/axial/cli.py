"""``axialctl``: build Matsuo algebras and report on axes, lines, solidity and
Jordan identities as deterministic JSON."""

from __future__ import annotations

import argparse
import dataclasses
import json
import random
import sys
from pathlib import Path

from . import __version__
from .algebra import (
    AlgebraError,
    AxisError,
    InconsistentForm,
    OrbitCapExceeded,
    SpanFailure,
    certify_axis,
    check_axis_identities,
    frobenius_form,
    miyamoto_orbit,
    check_partial_associativity,
)
from .jordan import Verdict, full_pipeline
from .lines import LineDimZeroOrOne, baric_model, classify_line, flat_model, orbit_size, toric_model
from .matsuo import GroupError, build_matsuo, catalog_data, catalog_names, class_from_group_data
from .scalars import FieldError, Rationals, field_from_spec
from .serialize import FormatError, algebra_from_json, algebra_to_json, dumps, file_sha256, jsonable, read_json, write_json
from .solidity import MethodDisagreement, NotApplicable, solidity_verdict

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NOT_JORDAN = 3
EXIT_INCONCLUSIVE = 4


PRIMITIVE_IN_LINE = "an idempotent c of a line is primitive when ad(c) restricted to the line has 1-eigenspace <c>"
JORDAN_ASSUMPTIONS = [
    "the linearized Jordan identity at a spanning set of idempotents implies the Jordan identity "
    "in characteristic not 3 (classical identities, taken as given)",
]


class InputError(Exception):
    pass


# -- argument handling ----------------------------------------------------------

def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field", help="Q, Fp:<p>, or a JSON field spec")
    p.add_argument("--eta", default=None, help="fusion parameter, default 1/2")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling")
    p.add_argument("--threads", type=int, default=1, help="worker processes for per-pair work")
    p.add_argument("--json-out", help="write the report here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    g = _global_flags()
    parser = argparse.ArgumentParser(prog="axialctl", description=__doc__)
    parser.add_argument("--version", action="version", version=f"axialctl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matsuo", parents=[g], help="build a Matsuo algebra from a group file")
    p.add_argument("--group", required=True, help=f"group JSON file or catalog name ({', '.join(catalog_names())})")
    p.add_argument("--out", required=True, help="algebra JSON to write")

    p = sub.add_parser("model", parents=[g], help="write a standalone toric, flat or baric line")
    p.add_argument("--kind", required=True, choices=["toric", "flat", "baric"])
    p.add_argument("--mu", default=None, help="toric parameter (not 0, 1 or -1)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", parents=[g], help="certify axes, Frobenius form and basic identities")
    p.add_argument("--algebra", required=True)

    p = sub.add_parser("lines", parents=[g], help="classify the lines spanned by pairs of axes")
    p.add_argument("--algebra", required=True)
    p.add_argument("--pairs", default="all", help="'all' or 'i,j;k,l'")

    p = sub.add_parser("solidity", parents=[g], help="decide solidity of lines")
    p.add_argument("--algebra", required=True)
    p.add_argument("--method", default="derivation", choices=["derivation", "polynomial", "enumerate", "all"])
    p.add_argument("--pairs", default="all")
    p.add_argument("--sample", type=int, default=None, help="random subset of this many pairs")

    p = sub.add_parser("jordan", parents=[g], help="almost-Jordan and Jordan identity verdict")
    p.add_argument("--algebra", required=True)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--cap", type=int, default=None, help="Miyamoto orbit cap (default 10*dim)")

    p = sub.add_parser("orbit", parents=[g], help="Miyamoto orbit sizes")
    p.add_argument("--algebra", required=True)
    p.add_argument("--pairs", default="all")
    p.add_argument("--cap", type=int, default=None)
    return parser


def parse_field(text):
    if text is None:
        return None
    text = text.strip()
    try:
        if text.startswith("{"):
            return field_from_spec(json.loads(text))
        return field_from_spec(text)
    except (FieldError, ValueError, KeyError) as exc:
        raise InputError(f"bad field {text!r}: {exc}") from exc


def parse_pairs(text: str, n: int) -> list:
    if text == "all":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    pairs = []
    for chunk in text.split(";"):
        try:
            i, j = (int(x) for x in chunk.split(","))
        except ValueError as exc:
            raise InputError(f"bad pair {chunk!r}") from exc
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise InputError(f"pair {chunk!r} out of range for {n} axes")
        pairs.append((min(i, j), max(i, j)))
    return sorted(set(pairs))


def manifest(args, inputs: dict, field=None, eta=None) -> dict:
    skip = {"json_out", "threads", "algebra", "group", "out", "command"}
    options = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    return {
        "command": args.command,
        "inputs": inputs,
        "field": None if field is None else field.spec(),
        "eta": None if eta is None else field.to_json(eta),
        "seed": args.seed,
        "options": options,
        "tool_version": __version__,
    }


def emit(args, report) -> None:
    text = dumps(report)
    if args.json_out:
        Path(args.json_out).write_text(text)
    else:
        sys.stdout.write(text)


def load_algebra(args):
    path = Path(args.algebra)
    if not path.exists():
        raise InputError(f"{path}: no such file")
    data = read_json(path)
    A = algebra_from_json(data, parse_field(args.field))
    if args.eta is not None:
        A = type(A)(A.field, A.table, labels=A.labels, axes=A.axes, eta=A.field(args.eta))
    if not A.axes:
        raise InputError("the algebra file declares no axes")
    return A, {path.name: file_sha256(path)}


# -- per-pair workers -------------------------------------------------------------

_CTX: dict = {}


def _init_ctx(algebra_json, field_spec):
    F = None if field_spec is None else field_from_spec(field_spec)
    A = algebra_from_json(algebra_json, F)
    recs = [certify_axis(A, a, A.eta) for a in A.axes]
    _CTX.clear()
    _CTX.update(A=A, recs=recs, form=frobenius_form(A, recs))


def _ctx_args(A):
    return algebra_to_json(A), None


def _line_row(pair):
    i, j = pair
    A, recs, form = _CTX["A"], _CTX["recs"], _CTX["form"]
    L = classify_line(A, recs[i], recs[j], form, indices=pair)
    try:
        osz = orbit_size(L).to_json()
    except LineDimZeroOrOne:
        osz = None
    row = {
        "i": i, "j": j, "kind": L.kind.value, "dim": L.dim,
        "gram_ab": L.base_field.to_json(L.gram_ab),
        "mu_or_null": None if L.mu is None else L.field.to_json(L.mu),
        "orbit_size": osz,
    }
    if L.extended:
        row["line_field"] = L.field.spec()
    return row


def _solidity_row(task):
    (i, j), methods = task
    A, recs, form = _CTX["A"], _CTX["recs"], _CTX["form"]
    L = classify_line(A, recs[i], recs[j], form, indices=(i, j))
    row = {"i": i, "j": j, "kind": L.kind.value, "gram_ab": L.base_field.to_json(L.gram_ab)}
    try:
        v = solidity_verdict(L, methods)
    except MethodDisagreement as exc:
        row["disagreement"] = str(exc)
        return row
    show = lambda x: "NotApplicable" if x is NotApplicable else x  # noqa: E731
    row["verdicts"] = {"derivation": v.by_derivation}
    if "polynomial" in methods:
        row["verdicts"]["polynomial"] = show(v.by_polynomial)
    if "enumerate" in methods:
        row["verdicts"]["enumerate"] = show(v.by_enumeration)
    row["solid"] = v.solid
    if v.witnesses:
        row["witness"] = jsonable(v.witnesses)
    return row


def _orbit_row(pair):
    i, j = pair
    A, recs, form = _CTX["A"], _CTX["recs"], _CTX["form"]
    L = classify_line(A, recs[i], recs[j], form, indices=pair)
    try:
        osz = orbit_size(L)
    except LineDimZeroOrOne:
        return {"i": i, "j": j, "kind": L.kind.value, "orbit_size": None}
    return {"i": i, "j": j, "kind": L.kind.value, "orbit_size": osz.to_json(), "explicit_size": osz.explicit}


def _run_pairs(args, A, fn, tasks):
    from .parallel import parallel_map

    rows = parallel_map(fn, tasks, args.threads, initializer=_init_ctx, initargs=_ctx_args(A))
    return sorted(rows, key=lambda r: (r["i"], r["j"]))


# -- commands -------------------------------------------------------------------

def cmd_matsuo(args) -> int:
    F = parse_field(args.field) or Rationals()
    path = Path(args.group)
    if path.exists():
        data = read_json(path)
        inputs = {path.name: file_sha256(path)}
    elif args.group in catalog_names():
        data = catalog_data(args.group)
        inputs = {f"catalog:{args.group}": data.get("sha256")}
    else:
        raise InputError(f"{args.group!r} is neither a file nor a catalog group")
    tc = class_from_group_data(data)
    eta = F.half if args.eta is None else F(args.eta)
    A = build_matsuo(tc, F, eta)
    write_json(args.out, algebra_to_json(A))
    emit(args, {
        "manifest": manifest(args, inputs, F, eta),
        "group": tc.name, "class_size": len(tc), "group_order": tc.group_order, "dim": A.dim,
    })
    return EXIT_OK


def cmd_model(args) -> int:
    F = parse_field(args.field) or Rationals()
    if args.kind == "toric":
        if args.mu is None:
            raise InputError("--mu is required for a toric model")
        mu = F(args.mu)
        if F.is_zero(mu) or F.eq(mu, F.one) or F.eq(mu, F.reduce(-F.one)):
            raise InputError("mu must avoid 0, 1 and -1")
        A = toric_model(F, mu)
    elif args.kind == "flat":
        A = flat_model(F)
    else:
        A = baric_model(F)
    write_json(args.out, algebra_to_json(A))
    emit(args, {"manifest": manifest(args, {}, F, A.eta), "kind": args.kind, "dim": A.dim})
    return EXIT_OK


def cmd_verify(args) -> int:
    A, inputs = load_algebra(args)
    F = A.field
    report = {"manifest": manifest(args, inputs, F, A.eta), "dim": A.dim, "axes": len(A.axes)}
    recs = []
    for idx, a in enumerate(A.axes):
        try:
            recs.append(certify_axis(A, a, A.eta))
        except AxisError as exc:
            report.update(passed=False, failure={
                "axis": idx, "check": exc.check, "message": str(exc), "witness": jsonable(exc.witness),
            })
            emit(args, report)
            return EXIT_FAIL
    try:
        form = frobenius_form(A, recs)
    except (SpanFailure, InconsistentForm) as exc:
        report.update(passed=False, failure={"check": type(exc).__name__, "message": str(exc)})
        emit(args, report)
        return EXIT_FAIL
    for idx, r in enumerate(recs):
        for name, res in (("axis_identities", check_axis_identities(A, r, form)), ("partial_associativity", check_partial_associativity(A, r))):
            if not res:
                report.update(passed=False, failure={"axis": idx, "check": name, "witness": jsonable(res.witness)})
                emit(args, report)
                return EXIT_FAIL
    report.update(
        passed=True,
        eigenspace_dims=[[len(r.decomposition.basis_1), len(r.decomposition.basis_0), len(r.decomposition.basis_half)] for r in recs],
        gram=jsonable(form.gram),
    )
    emit(args, report)
    return EXIT_OK


def cmd_lines(args) -> int:
    A, inputs = load_algebra(args)
    pairs = parse_pairs(args.pairs, len(A.axes))
    rows = _run_pairs(args, A, _line_row, pairs)
    emit(args, {"manifest": manifest(args, inputs, A.field, A.eta), "rows": rows})
    return EXIT_OK


def cmd_solidity(args) -> int:
    A, inputs = load_algebra(args)
    pairs = parse_pairs(args.pairs, len(A.axes))
    if args.sample is not None and args.sample < len(pairs):
        pairs = sorted(random.Random(args.seed).sample(pairs, args.sample))
    methods = ("derivation", "polynomial", "enumerate") if args.method == "all" else (args.method,)
    rows = _run_pairs(args, A, _solidity_row, [(p, methods) for p in pairs])
    disagreements = [r for r in rows if "disagreement" in r]
    solid = sum(1 for r in rows if r.get("solid"))
    summary = {"pairs": len(rows), "solid": solid, "non_solid": len(rows) - solid - len(disagreements),
               "mixed": 0 < solid < len(rows) - len(disagreements)}
    emit(args, {"manifest": manifest(args, inputs, A.field, A.eta), "rows": rows, "summary": summary,
                "conventions": {"primitive": PRIMITIVE_IN_LINE}})
    return EXIT_FAIL if disagreements else EXIT_OK


def cmd_jordan(args) -> int:
    A, inputs = load_algebra(args)
    rep = full_pipeline(A, trials=args.trials, seed=args.seed, cap=args.cap, threads=args.threads)
    emit(args, {"manifest": manifest(args, inputs, A.field, A.eta), "report": dataclasses.asdict(rep),
                "assumptions": JORDAN_ASSUMPTIONS})
    return {Verdict.JORDAN: EXIT_OK, Verdict.NOT_JORDAN: EXIT_NOT_JORDAN}.get(rep.final_verdict, EXIT_INCONCLUSIVE)


def cmd_orbit(args) -> int:
    A, inputs = load_algebra(args)
    recs = [certify_axis(A, a, A.eta) for a in A.axes]
    try:
        orbit = miyamoto_orbit(A, recs, cap=args.cap)
        closure = {"size": len(orbit), "capped": False}
    except OrbitCapExceeded as exc:
        closure = {"size": None, "capped": True, "message": str(exc)}
    pairs = parse_pairs(args.pairs, len(A.axes))
    rows = _run_pairs(args, A, _orbit_row, pairs)
    emit(args, {"manifest": manifest(args, inputs, A.field, A.eta), "axis_orbit": closure, "rows": rows})
    return EXIT_OK


COMMANDS = {
    "matsuo": cmd_matsuo,
    "model": cmd_model,
    "verify": cmd_verify,
    "lines": cmd_lines,
    "solidity": cmd_solidity,
    "jordan": cmd_jordan,
    "orbit": cmd_orbit,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, FormatError, GroupError, FieldError, FileNotFoundError, ValueError) as exc:
        print(f"axialctl: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AlgebraError as exc:
        print(f"axialctl: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

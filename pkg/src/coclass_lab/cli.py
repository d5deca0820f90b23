"""Command-line surface: validation, invariants, enumeration, witnesses, suite.

Exit codes partition outcomes: 0 success/consistent, 1 inconsistency or
failed validation, 2 usage errors, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import NonNilpotentError
from .constructions import CatalogError, builtin, load_catalog
from .fields import FieldError, FieldSpec
from .harness import (
    SUITE_BUDGET,
    dim5_witness,
    heisenberg_witness,
    predict,
    profile,
    run_suite,
    verify,
)
from .search import (
    DEFAULT_BUDGET,
    AbelianShortCircuit,
    BudgetExceededError,
    closure_check,
    enumerate_commuting,
)

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

BUDGET_ENV = "COCLASS_LAB_BUDGET"


def _env_budget():
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(text)


def _resolve_algebra(spec: str, field: FieldSpec):
    name = spec[len("builtin:") :] if spec.startswith("builtin:") else spec
    return builtin(name, field)


def _grid(matrix, field) -> list:
    return [[field.unparse(x) for x in row] for row in matrix.rows]


def _cmd_validate(args) -> int:
    try:
        entries = load_catalog(args.file)
    except (CatalogError, OSError) as exc:
        _emit(args, {"ok": False, "error": str(exc)}, f"invalid: {exc}")
        return EXIT_INCONSISTENT
    names = [e.name for e in entries]
    _emit(
        args,
        {"ok": True, "entries": names},
        f"ok: {len(names)} entries valid ({', '.join(names)})" if names else "ok: empty catalog",
    )
    return EXIT_OK


def _profile_payload(name: str, algebra) -> dict:
    prof = profile(algebra)
    pred = predict(prof)
    return {"name": name, "profile": prof.as_dict(), "prediction": pred.as_dict()}


def _profile_text(payload: dict) -> str:
    prof = payload["profile"]
    pred = payload["prediction"]
    fields = ", ".join(f"{k}={v}" for k, v in prof.items())
    return f"{payload['name']}: {fields}\n  prediction: {pred['verdict']} [{pred['rule']}] {pred['description']}"


def _cmd_invariants(args) -> int:
    field = FieldSpec.prime(args.p)
    if os.path.exists(args.target) and not args.target.startswith("builtin:"):
        entries = load_catalog(args.target)
        payloads = [_profile_payload(e.name, e.algebra) for e in entries]
    else:
        algebra = _resolve_algebra(args.target, field)
        payloads = [_profile_payload(args.target, algebra)]
    _emit(args, {"profiles": payloads}, "\n".join(_profile_text(p) for p in payloads))
    return EXIT_OK


def _cmd_search_commuting(args) -> int:
    field = FieldSpec.prime(args.p)
    algebra = _resolve_algebra(args.algebra, field)
    try:
        aset = enumerate_commuting(algebra, budget=args.budget)
    except AbelianShortCircuit as exc:
        _emit(
            args,
            {"size": exc.aut_order, "short_circuit": True, "members": None},
            f"abelian algebra: commuting set = GL({algebra.dim},{field.p}), order {exc.aut_order}",
        )
        return EXIT_OK
    payload = {"size": aset.size, "short_circuit": False, "members": None}
    text = f"commuting automorphisms: {aset.size}"
    if args.members:
        payload["members"] = [_grid(m.matrix, field) for m in aset.members]
        shown = "\n".join(str(_grid(m.matrix, field)) for m in aset.members)
        text += "\n" + shown
    _emit(args, payload, text)
    return EXIT_OK


def _cmd_check_subgroup(args) -> int:
    field = FieldSpec.prime(args.p)
    algebra = _resolve_algebra(args.algebra, field)
    try:
        aset = enumerate_commuting(algebra, budget=args.budget)
    except AbelianShortCircuit as exc:
        _emit(
            args,
            {"closed": True, "short_circuit": True, "size": exc.aut_order, "witness": None},
            f"closed: abelian algebra, commuting set = GL({algebra.dim},{field.p})",
        )
        return EXIT_OK
    verdict = closure_check(aset)
    payload = {
        "closed": verdict.closed,
        "short_circuit": False,
        "size": aset.size,
        "pair_count": verdict.pair_count,
        "witness": None,
    }
    if verdict.closed:
        text = f"closed: all compositions commute (|A| = {aset.size})"
    else:
        w = verdict.witness
        payload["witness"] = {
            "f": _grid(w.f.matrix, field),
            "g": _grid(w.g.matrix, field),
            "vector": [field.unparse(x) for x in w.vector],
            "bracket_residual": [field.unparse(x) for x in w.residual],
        }
        text = (
            f"not closed (|A| = {aset.size}): composition of members "
            f"{w.f_index} and {w.g_index} fails at x = {w.vector}, [g(f(x)), x] = {w.residual}"
        )
    _emit(args, payload, text)
    return EXIT_OK


def _witness_text(report) -> str:
    lines = [f"witness {report.family} {report.params or ''} over {report.field}".rstrip()]
    lines.append(f"  beta1 = {_grid(report.beta1.matrix, report.field)}")
    for name, m in sorted(report.beta2_by_variant.items()):
        lines.append(f"  beta2[{name}] = {_grid(m.matrix, report.field)}")
    for v in report.variants:
        lines.append(
            f"  [{v.variant}] beta1 commuting: {v.beta1_commuting}; "
            f"beta2 automorphism: {v.beta2_automorphism}, commuting: {v.beta2_commuting}; "
            f"beta1∘beta2 commuting: {v.composition_commuting}"
        )
        if v.defect_input is not None:
            lines.append(f"    defect: x = {v.defect_input}, [x, (beta1 beta2)(x)] = {v.defect_bracket}")
    lines.append(f"  ok: {report.ok}")
    return "\n".join(lines)


def _cmd_witness(args) -> int:
    field = FieldSpec.prime(args.p)
    if args.family == "heisenberg":
        report = heisenberg_witness(args.k, args.m, field, variant=args.variant)
    else:
        report = dim5_witness(field)
    _emit(args, report.as_dict(), _witness_text(report))
    return EXIT_OK if report.ok else EXIT_INCONSISTENT


def _cmd_verify(args) -> int:
    field = FieldSpec.prime(args.p)
    if args.catalog:
        entries = load_catalog(args.catalog)
        targets = [(e.name, e.algebra) for e in entries]
    else:
        targets = [(args.algebra, _resolve_algebra(args.algebra, field))]
    reports = [verify(alg, budget=args.budget, name=name) for name, alg in targets]
    payload = {"reports": [r.as_dict(field) for r in reports]}
    lines = []
    for r in reports:
        status = "consistent" if r.consistent else "INCONSISTENT"
        extra = f" ({r.unverified_reason})" if r.unverified_reason else ""
        lines.append(
            f"{r.name or 'algebra'}: {r.prediction.verdict} [{r.prediction.rule}] -> {status}{extra}"
        )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if all(r.consistent for r in reports) else EXIT_INCONSISTENT


def _cmd_suite(args) -> int:
    report = run_suite(p=args.p, budget=args.budget)
    _emit(args, report.as_dict(), report.to_text())
    return EXIT_OK if report.ok else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coclass-lab",
        description="Exact checks on commuting automorphisms of nilpotent Lie algebras.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--budget", type=int, default=None,
                        help="candidate-extension cap for enumerations "
                        f"(default 10^8; 'suite' defaults to {SUITE_BUDGET}; "
                        f"env {BUDGET_ENV} overrides)")
    parser.add_argument("--parallelism", type=int, default=os.cpu_count() or 1,
                        help="worker count (reserved; execution is serial and deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="antisymmetry/Jacobi report for a catalog file")
    s.add_argument("file")
    s.set_defaults(func=_cmd_validate)

    s = sub.add_parser("invariants", help="structural profile of a file or builtin")
    s.add_argument("target", help="catalog file or builtin:NAME")
    s.add_argument("--p", type=int, default=3)
    s.set_defaults(func=_cmd_invariants)

    s = sub.add_parser("search-commuting", help="enumerate the commuting automorphisms")
    s.add_argument("algebra")
    s.add_argument("--p", type=int, default=3)
    s.add_argument("--members", action="store_true", help="print member matrices")
    s.set_defaults(func=_cmd_search_commuting)

    s = sub.add_parser("check-subgroup", help="closure verdict with witness")
    s.add_argument("algebra")
    s.add_argument("--p", type=int, default=3)
    s.set_defaults(func=_cmd_check_subgroup)

    s = sub.add_parser("witness", help="the explicit non-closure witnesses")
    ws = s.add_subparsers(dest="family", required=True)
    wh = ws.add_parser("heisenberg")
    wh.add_argument("--k", type=int, default=2)
    wh.add_argument("--m", type=int, default=1)
    wh.add_argument("--p", type=int, default=3)
    wh.add_argument("--variant", choices=("printed", "corrected", "both"), default="both")
    wh.set_defaults(func=_cmd_witness)
    wd = ws.add_parser("dim5")
    wd.add_argument("--p", type=int, default=3)
    wd.set_defaults(func=_cmd_witness)

    s = sub.add_parser("verify", help="prediction vs enumeration verdicts")
    s.add_argument("algebra", nargs="?")
    s.add_argument("--catalog", help="verify every entry of a catalog file")
    s.add_argument("--p", type=int, default=3)
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("suite", help="the full acceptance battery")
    s.add_argument("--p", type=int, default=3)
    s.set_defaults(func=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.algebra and not args.catalog:
        parser.error("verify needs an algebra or --catalog FILE")
    if args.budget is None:
        env = _env_budget()
        if env is not None:
            args.budget = env
        else:
            args.budget = SUITE_BUDGET if args.command == "suite" else DEFAULT_BUDGET
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CatalogError, FieldError, NonNilpotentError, ValueError) as exc:
        parser.exit(EXIT_USAGE, f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())

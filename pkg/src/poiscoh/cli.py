"""Command-line front end.

Every verb is a thin wrapper over a library call: sources are resolved
(``builtin:NAME`` or ``file:PATH``), the computation runs, and the report is
emitted as canonical JSON (``--table`` renders a plain-text view of the same
data).  Exit codes: 0 success, 1 domain errors or failed checks, 2 usage
errors.  Diagnostics go to stderr, data to stdout or ``--output``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .algebra import (
    AlgebraSpec,
    AxiomError,
    BUILTINS,
    ModuleSpec,
    StructuralError,
    algebra_to_dict,
    builtin,
    load_algebra,
    load_module,
    module_to_dict,
    ratio,
    regular_module,
    validate_algebra,
    validate_module,
)
from .cochain import CochainSpace
from .cohomology import cohomology_dims, lp_cohomology
from .complexes import differential
from .deformation import (
    extension_algebra,
    lift_step,
    m2_table3_series,
    obstruction_is_closed,
    obstruction_tables,
    quantization_obstruction_check,
    series_from_file_dict,
    series_to_file_dict,
    verify_deformation,
)

THEORY_ALIASES = {
    "hp": "poisson",
    "poisson": "poisson",
    "quasi": "quasi",
    "omega": "omega",
    "hh": "hochschild",
    "hochschild": "hochschild",
    "hl": "ce",
    "ce": "ce",
    "lie": "ce",
}

WORKERS_ENV = "POISCOH_WORKERS"


class CliError(Exception):
    """Domain-level failure: bad input data, unknown name, broken file."""


# ---------------------------------------------------------------------------
# Source resolution and output plumbing


def _source(text: str) -> str:
    if text.startswith(("builtin:", "file:")) or text == "regular":
        return text
    raise argparse.ArgumentTypeError(
        f"{text!r}: expected builtin:NAME or file:PATH")


def _series_source(text: str) -> str:
    if text.startswith(("file:", "table3", "table3-repaired")):
        return text
    raise argparse.ArgumentTypeError(
        f"{text!r}: expected file:PATH, table3[:s], or table3-repaired[:s]")


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc


def _resolve_algebra(src: str) -> AlgebraSpec:
    kind, _, rest = src.partition(":")
    if kind == "builtin":
        return builtin(rest)
    try:
        return load_algebra(rest)
    except OSError as exc:
        raise CliError(f"cannot read {rest}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{rest} is not valid JSON: {exc}") from exc


def _resolve_module(src: str, alg: AlgebraSpec) -> ModuleSpec:
    if src == "regular":
        return regular_module(alg)
    kind, _, rest = src.partition(":")
    if kind == "builtin":
        raise CliError("modules have no builtin registry; use 'regular' or file:PATH")
    try:
        return load_module(rest, alg)
    except OSError as exc:
        raise CliError(f"cannot read {rest}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{rest} is not valid JSON: {exc}") from exc


def _resolve_series(src: str):
    if src.startswith("file:"):
        return series_from_file_dict(_load_json(src[5:]))
    name, _, param = src.partition(":")
    s = ratio(param) if param else 1
    if name == "table3":
        return m2_table3_series(s)
    if name == "table3-repaired":
        return m2_table3_series(s, repaired=True)
    raise CliError(f"unknown series source {src!r}")


def _check_workers_env() -> None:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return
    try:
        value = int(raw)
    except ValueError:
        raise CliError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise CliError(f"{WORKERS_ENV} must be >= 1, got {value}")
    # The exact-arithmetic engine runs single-threaded; any cap >= 1 is
    # accepted and behaves identically.


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON-serializable: {obj!r}")


def _emit(args, data, table: str | None = None) -> None:
    if getattr(args, "table", False) and table is not None:
        text = table if table.endswith("\n") else table + "\n"
    else:
        text = json.dumps(data, indent=2, sort_keys=True,
                          default=_json_default) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(
                f"cannot write {args.output}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


def _warn_cost(alg: AlgebraSpec, max_degree: int) -> None:
    if max_degree > 5 and alg.dim >= 4:
        print(f"warning: degree {max_degree} over a dim-{alg.dim} algebra "
              f"builds cochain spaces of order {alg.dim}^{max_degree}; "
              "expect a long run", file=sys.stderr)


def _validation_dict(report) -> dict:
    return {
        "ok": report.ok,
        "checked": list(report.checked),
        "violations": [
            {"axiom": v.axiom, "indices": list(v.indices),
             "residual": [str(Fraction(x)) for x in v.residual]}
            for v in report.violations
        ],
    }


# ---------------------------------------------------------------------------
# Table renderers (presentation only; JSON is canonical)


def _cohomology_table(payload: dict) -> str:
    lines = [f"theory: {payload['theory']}    sign convention: "
             f"{payload['sign_convention']}"]
    lines.append(f"{'degree':>6}  {'space':>6}  {'rank':>6}  {'dim':>6}")
    ranks = payload["ranks"]
    for n, (space, dim) in enumerate(zip(payload["space_dims"], payload["dims"])):
        rank = ranks[n] if n < len(ranks) else "-"
        lines.append(f"{n:>6}  {space:>6}  {rank:>6}  {dim:>6}")
    return "\n".join(lines)


def _validate_table(payload: dict) -> str:
    lines = []
    for part in ("algebra", "module"):
        if part not in payload:
            continue
        rep = payload[part]
        status = "ok" if rep["ok"] else "FAILED"
        lines.append(f"{part}: {status} (checked: {', '.join(rep['checked'])})")
        for v in rep["violations"]:
            idx = ",".join(str(i) for i in v["indices"])
            lines.append(f"  {v['axiom']} at ({idx}): residual {v['residual']}")
    return "\n".join(lines)


def _examples_table(payload: list) -> str:
    width = max(len(row["name"]) for row in payload)
    lines = [f"{'name':<{width}}  dim  flags             description"]
    for row in payload:
        flags = []
        if row["commutative"]:
            flags.append("commutative")
        if row["zero_bracket"]:
            flags.append("zero-bracket")
        lines.append(f"{row['name']:<{width}}  {row['dim']:>3}  "
                     f"{','.join(flags) or '-':<16}  {row['description']}")
    return "\n".join(lines)


def _deform_check_table(payload: dict) -> str:
    lines = [f"valid through order {payload['max_order']}: "
             f"{'yes' if payload['ok'] else 'NO'}   "
             f"unit preserved: {'yes' if payload['unital'] else 'NO'}"]
    for rec in payload["failures"]:
        lines.append(f"  {rec['axiom']} fails at order {rec['order']} "
                     f"({rec['count']} basis triples); first witnesses:")
        for sample in rec["samples"]:
            idx = ",".join(str(i) for i in sample["indices"])
            lines.append(f"    ({idx}) -> {sample['residual']}")
    return "\n".join(lines)


def _quantize_table(payload: dict) -> str:
    return "\n".join(f"{key}: {payload[key]}" for key in sorted(payload))


# ---------------------------------------------------------------------------
# Verbs


def cmd_validate(args) -> int:
    alg = _resolve_algebra(args.algebra)
    payload = {"algebra": _validation_dict(validate_algebra(alg))}
    ok = payload["algebra"]["ok"]
    if args.module:
        mod = _resolve_module(args.module, alg)
        payload["module"] = _validation_dict(validate_module(alg, mod))
        ok = ok and payload["module"]["ok"]
    _emit(args, payload, _validate_table(payload))
    return 0 if ok else 1


def cmd_cohomology(args) -> int:
    alg = _resolve_algebra(args.algebra)
    mod = _resolve_module(args.module, alg)
    theory = THEORY_ALIASES[args.theory]
    _warn_cost(alg, args.max_degree)
    report = cohomology_dims(alg, mod, theory=theory, max_degree=args.max_degree,
                             representatives=args.representatives)
    payload = report.to_dict()
    if args.dump_matrices:
        payload["matrices"] = {
            f"d{n}": differential(alg, mod, theory, n).dump_text()
            for n in range(args.max_degree + 1)
        }
    _emit(args, payload, _cohomology_table(payload))
    return 0


def cmd_lp(args) -> int:
    alg = _resolve_algebra(args.algebra)
    _warn_cost(alg, args.max_degree)
    report = lp_cohomology(alg, max_degree=args.max_degree)
    payload = report.to_dict()
    _emit(args, payload, _cohomology_table(payload))
    return 0


def cmd_deform_check(args) -> int:
    series = _resolve_series(args.series)
    order = args.order if args.order is not None else series.order
    check = verify_deformation(series, max_order=order)
    payload = check.to_dict()
    _emit(args, payload, _deform_check_table(payload))
    return 0 if check.ok else 1


def cmd_deform_lift(args) -> int:
    series = _resolve_series(args.series)
    target = args.target_order if args.target_order is not None else series.order + 1
    if target <= series.order:
        raise CliError(f"series already has order {series.order}; "
                       f"target must exceed it")
    obstructed_at = None
    current = series
    while current.order < target:
        lifted = lift_step(current)
        if lifted is None:
            obstructed_at = current.order + 1
            break
        current = lifted
    payload = {
        "start_order": series.order,
        "target_order": target,
        "reached_order": current.order,
        "status": "obstructed" if obstructed_at is not None else "lifted",
        "obstructed_at": obstructed_at,
        "series": series_to_file_dict(current),
    }
    _emit(args, payload)
    return 0


def cmd_obstruction(args) -> int:
    series = _resolve_series(args.series)
    order = args.order if args.order is not None else series.order + 1

    def sparse(table):
        out = []
        d = series.algebra.dim
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for p, v in enumerate(table[i][j][k]):
                        if v:
                            out.append([i, j, k, p, str(Fraction(v))])
        return out

    f1, f2, f3 = obstruction_tables(series, order)
    payload = {
        "order": order,
        "associativity_rhs": sparse(f1),
        "leibniz_rhs": sparse(f2),
        "jacobi_rhs": sparse(f3),
        "closed": obstruction_is_closed(series, order),
    }
    _emit(args, payload)
    return 0


def cmd_extend(args) -> int:
    alg = _resolve_algebra(args.algebra)
    mod = _resolve_module(args.module, alg)
    d, m = alg.dim, mod.dim
    f1 = [[[0] * m for _ in range(d)] for _ in range(d)]
    f0 = [[[0] * m for _ in range(d)] for _ in range(d)]
    if args.cocycle:
        data = _load_json(args.cocycle[5:] if args.cocycle.startswith("file:")
                          else args.cocycle)
        for key, table in (("f1", f1), ("f0", f0)):
            for entry in data.get(key, []):
                try:
                    i, j, p, value = entry
                except (TypeError, ValueError) as exc:
                    raise CliError(f"{key}: entries must be [i, j, p, value]") from exc
                if not (0 <= i < d and 0 <= j < d and 0 <= p < m):
                    raise CliError(f"{key}: index out of range in {entry!r}")
                table[i][j][p] += ratio(value)
    ext = extension_algebra(alg, mod, f1, f0)
    payload = {
        "dim": ext.dim,
        "basis": list(ext.basis),
        "algebra": algebra_to_dict(ext),
        "validation": _validation_dict(validate_algebra(ext)),
    }
    _emit(args, payload)
    return 0


def cmd_quantize_check(args) -> int:
    alg = _resolve_algebra(args.algebra)
    payload = quantization_obstruction_check(alg, max_order=args.max_order)
    _emit(args, payload, _quantize_table(payload))
    return 0 if payload["ok"] else 1


def cmd_examples(args) -> int:
    payload = []
    for name in sorted(BUILTINS):
        alg = builtin(name)
        payload.append({
            "name": name,
            "dim": alg.dim,
            "description": BUILTINS[name][0],
            "commutative": alg.is_commutative,
            "zero_bracket": alg.has_zero_bracket,
        })
    _emit(args, payload, _examples_table(payload))
    return 0


def cmd_dump(args) -> int:
    if args.what == "series":
        if not args.series:
            raise CliError("dump --what series needs --series")
        _emit(args, series_to_file_dict(_resolve_series(args.series)))
        return 0
    alg = _resolve_algebra(args.algebra)
    if args.what == "algebra":
        _emit(args, algebra_to_dict(alg))
        return 0
    mod = _resolve_module(args.module, alg)
    if args.what == "module":
        _emit(args, module_to_dict(mod))
        return 0
    # differential matrix in the exact-linalg dump format
    theory = THEORY_ALIASES[args.theory]
    mat = differential(alg, mod, theory, args.degree)
    if args.table:
        _emit(args, None, mat.dump_text())
    else:
        space = CochainSpace.build(theory, args.degree, alg.dim, mod.dim)
        _emit(args, {
            "theory": theory,
            "degree": args.degree,
            "nrows": mat.nrows,
            "ncols": mat.ncols,
            "source_blocks": [[i, j] for i, j in space.blocks],
            "entries": [[r, c, str(Fraction(v))] for r, c, v in mat.triples()],
        })
    return 0


# ---------------------------------------------------------------------------
# Parser


def _add_common(sub, *, module=False, module_default="regular", degree=False):
    sub.add_argument("--algebra", type=_source, required=True,
                     help="builtin:NAME or file:PATH")
    if module:
        sub.add_argument("--module", type=_source, default=module_default,
                         help="'regular' (default) or file:PATH")
    if degree:
        sub.add_argument("--max-degree", type=int, default=4,
                         help="top degree to compute (default 4; a warning "
                              "is emitted above 5 for dim >= 4)")


def _add_output(sub):
    sub.add_argument("--output", help="write the report here instead of stdout")
    fmt = sub.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="table", action="store_false",
                     help="canonical JSON output (default)")
    fmt.add_argument("--table", dest="table", action="store_true",
                     help="plain-text rendering of the same data")
    sub.set_defaults(table=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poiscoh",
        description="Exact cohomology and deformation computations for "
                    "finite-dimensional Poisson algebras given by rational "
                    "structure constants.",
        epilog=f"The {WORKERS_ENV} environment variable caps worker "
               "parallelism; the exact-arithmetic engine currently runs "
               "single-threaded, so any value >= 1 behaves identically.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="verb", required=True)

    sub = subs.add_parser("validate", help="check algebra/module axioms")
    _add_common(sub, module=True, module_default=None)
    sub.set_defaults(func=cmd_validate)
    _add_output(sub)

    sub = subs.add_parser("cohomology", help="cohomology dims of a theory")
    _add_common(sub, module=True, degree=True)
    sub.add_argument("--theory", choices=sorted(THEORY_ALIASES), default="hp",
                     help="hp/poisson, quasi, omega, hh/hochschild, hl/ce/lie")
    sub.add_argument("--representatives", action="store_true",
                     help="include a cocycle representative basis per degree")
    sub.add_argument("--dump-matrices", action="store_true",
                     help="embed every differential in the dump format")
    sub.set_defaults(func=cmd_cohomology)
    _add_output(sub)

    sub = subs.add_parser("lp", help="multiderivation-complex cohomology "
                                     "(commutative algebras)")
    _add_common(sub, degree=True)
    sub.set_defaults(func=cmd_lp)
    _add_output(sub)

    sub = subs.add_parser("deform-check", help="per-order axiom residuals of "
                                               "a deformation series")
    sub.add_argument("--series", type=_series_source, required=True,
                     help="file:PATH, table3[:s], or table3-repaired[:s]")
    sub.add_argument("--order", type=int, default=None,
                     help="check through this t-order (default: series order)")
    sub.set_defaults(func=cmd_deform_check)
    _add_output(sub)

    sub = subs.add_parser("deform-lift", help="extend a partial deformation "
                                              "order by order")
    sub.add_argument("--series", type=_series_source, required=True)
    sub.add_argument("--target-order", type=int, default=None,
                     help="lift until this order (default: one step)")
    sub.set_defaults(func=cmd_deform_lift)
    _add_output(sub)

    sub = subs.add_parser("obstruction", help="order-n obstruction tables "
                                              "and cocycle check")
    sub.add_argument("--series", type=_series_source, required=True)
    sub.add_argument("--order", type=int, default=None,
                     help="obstruction order (default: series order + 1)")
    sub.set_defaults(func=cmd_obstruction)
    _add_output(sub)

    sub = subs.add_parser("extend", help="square-zero extension by a module "
                                         "twisted by a 2-cocycle pair")
    _add_common(sub, module=True)
    sub.add_argument("--cocycle", help="JSON file with sparse f1/f0 tables "
                                       "([i, j, p, value] entries)")
    sub.set_defaults(func=cmd_extend)
    _add_output(sub)

    sub = subs.add_parser("quantize-check", help="order-by-order lifting of "
                                                 "the semiclassical series")
    _add_common(sub)
    sub.add_argument("--max-order", type=int, default=3)
    sub.set_defaults(func=cmd_quantize_check)
    _add_output(sub)

    sub = subs.add_parser("examples", help="list built-in algebras")
    sub.set_defaults(func=cmd_examples)
    _add_output(sub)

    sub = subs.add_parser("dump", help="emit algebra/module/series JSON or a "
                                       "differential matrix")
    sub.add_argument("--what", choices=("algebra", "module", "differential",
                                        "series"), default="algebra")
    sub.add_argument("--algebra", type=_source,
                     help="builtin:NAME or file:PATH (not needed for series)")
    sub.add_argument("--module", type=_source, default="regular")
    sub.add_argument("--series", type=_series_source, default=None)
    sub.add_argument("--theory", choices=sorted(THEORY_ALIASES), default="hp")
    sub.add_argument("--degree", type=int, default=2,
                     help="differential slice to dump")
    sub.set_defaults(func=cmd_dump)
    _add_output(sub)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "dump" and args.what != "series" and not args.algebra:
        parser.error("dump: --algebra is required unless --what series")
    try:
        _check_workers_env()
        return args.func(args)
    except (StructuralError, AxiomError, CliError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

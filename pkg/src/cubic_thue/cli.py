"""``cubic-thue`` command line.

Exit codes: 0 success, 1 component error (a JSON error object is printed
instead of any result), 2 usage error.  ``verify-corpus`` also exits 1 when a
criterion fails, but still prints its full report.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import corpus, gaps, matveev, solver
from .errors import ThueError
from .forms import (
    BinaryCubicForm,
    apply_unimodular,
    discriminant,
    g_covariant,
    hessian,
    reduce,
    syzygy_check,
)
from .numerics import DEFAULT_PREC, MAX_PREC, MIN_PREC
from .resolvent import build_resolvent, eval_point

PREC_ENV = "CUBIC_THUE_PREC_BITS"
BRANCH_CHOICES = ("pass1", "pass2", "nonmonic", "all")


class UsageError(Exception):
    pass


def digits_for(prec_bits: int) -> int:
    """Printed significant digits: the precision in decimal, less ten guard digits."""
    return max(15, int(prec_bits * math.log10(2)) - 10)


def _default_prec() -> int:
    raw = os.environ.get(PREC_ENV)
    if raw is None:
        return DEFAULT_PREC
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PREC_ENV} must be an integer, got {raw!r}") from None


def _form(args) -> BinaryCubicForm:
    return BinaryCubicForm(args.a, args.b, args.c, args.d)


def _cmd_analyze(args):
    A = solver.analyze_form(_form(args), args.box, args.prec_bits, args.unit_bound)
    return A.to_json(digits_for(args.prec_bits))


def _cmd_reduce(args):
    F = _form(args)
    red, gamma = reduce(F)
    assert apply_unimodular(F, gamma) == red
    return {
        "form": F.to_json(),
        "reduced": red.to_json(),
        "map": gamma.to_json(),
        "hessian": hessian(red).to_json(),
    }


def _cmd_solve(args):
    F = _form(args)
    sols = solver.enumerate_solutions(F, args.box)
    return {
        "form": F.to_json(),
        "box": str(args.box),
        "count_note": "within search box",
        "count_F_eq_1": str(len(sols)),
        "solutions": [s.to_json(0) for s in sols],
        "F_eq_1_representatives": [[str(v) for v in p] for p in solver.plus_solutions(sols)],
    }


def _cmd_covariants(args):
    F = _form(args)
    return {
        "D": str(discriminant(F)),
        "H": hessian(F).to_json(),
        "syzygy": syzygy_check(F),
        "G": [str(v) for v in g_covariant(F)],
        "form": F.to_json(),
    }


def _cmd_gaps(args):
    F = _form(args)
    digits = digits_for(args.prec_bits)
    sols = solver.plus_solutions(solver.enumerate_solutions(F, args.box))
    R = build_resolvent(F, args.prec_bits)
    evs = [eval_point(R, *p) for p in sols]
    lattice, note = solver.unit_lattice_for(F, R.roots, args.unit_bound)
    cov = lattice.covolume if lattice is not None else None
    classes = {}
    for ev in evs:
        classes.setdefault(ev.related_index, []).append(ev)
    reports = [gaps.class_report(F, k, classes[k], cov, args.prec_bits) for k in sorted(classes)]
    form_checks, _ = gaps.disc_bound_checks(F, evs, args.prec_bits)
    passes, exc = gaps.hessian_floor_check(F, sols)
    out = {
        "form": F.to_json(),
        "box": str(args.box),
        "hessian_floor": {"passes": passes, "exception": None if exc is None else [str(v) for v in exc]},
        "reports": [r.to_json(digits) for r in reports],
        "form_checks": [c.to_json(digits) for c in form_checks],
        "covolume": None if lattice is None else lattice.to_json(digits)["covolume"],
        "all_hold": passes and all(r.ok for r in reports) and all(c.holds for c in form_checks),
    }
    if note:
        out["covolume_note"] = note
    return out


def _cmd_bounds(args):
    branches = matveev.BRANCHES if args.branch == "all" else (matveev.BRANCH_ALIASES[args.branch],)
    digits = min(digits_for(args.prec_bits), 20)
    reports = [
        matveev.solve_t_threshold(b, paper_constants=args.paper_constants, log_step=args.log_step,
                                  prec_bits=args.prec_bits).to_json(digits)
        for b in branches
    ]
    return reports[0] if len(reports) == 1 else reports


def _cmd_family(args):
    name = {"thomas": "thomas_g1", "fm": "f_m"}[args.name]
    return solver.family_form(name, args.param).to_json()


def _cmd_verify_corpus(args):
    return corpus.run_all(args.box, args.prec_bits)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec-bits", type=int, default=None,
                        help=f"working precision in bits, {MIN_PREC}..{MAX_PREC} (env {PREC_ENV})")
    common.add_argument("--output", choices=("json", "text"), default=None)

    def form_args(p):
        for name in "abcd":
            p.add_argument(name, type=int)

    def box_arg(p, default=solver.DEFAULT_BOX):
        p.add_argument("--box", type=int, default=default, help="search box max(|x|,|y|) <= N")

    def unit_arg(p):
        p.add_argument("--unit-bound", type=int, default=solver.DEFAULT_UNIT_BOUND,
                       help="coefficient bound for the unit search")

    parser = argparse.ArgumentParser(prog="cubic-thue", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full analysis of one form")
    form_args(p)
    box_arg(p)
    unit_arg(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("reduce", parents=[common], help="reduced form and unimodular map")
    form_args(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("solve", parents=[common], help="enumerate solutions of F = +-1")
    form_args(p)
    box_arg(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("covariants", parents=[common], help="D, H, G and the syzygy")
    form_args(p)
    p.set_defaults(func=_cmd_covariants)

    p = sub.add_parser("gaps", parents=[common], help="gap-principle checks")
    form_args(p)
    box_arg(p)
    unit_arg(p)
    p.set_defaults(func=_cmd_gaps)

    p = sub.add_parser("bounds", parents=[common], help="threshold computations")
    p.add_argument("--branch", choices=BRANCH_CHOICES, default="all")
    p.add_argument("--literal-constants", dest="paper_constants", action="store_true",
                   help="use the printed decimal constants")
    p.add_argument("--log-step", choices=matveev.LOG_STEPS, default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("family", parents=[common], help="members of the named families")
    p.add_argument("name", choices=("thomas", "fm"))
    p.add_argument("param", type=int)
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("verify-corpus", parents=[common], help="run the acceptance checks")
    box_arg(p, corpus.GOLDEN_BOX)
    p.set_defaults(func=_cmd_verify_corpus)
    return parser


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield f"{prefix}: {json.dumps(obj) if not isinstance(obj, str) else obj}"


def _emit(obj, fmt, out):
    if fmt == "text":
        out.write("\n".join(_flatten(obj)) + "\n")
    else:
        out.write(json.dumps(obj, indent=2) + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.prec_bits is None:
            args.prec_bits = _default_prec()
        if not MIN_PREC <= args.prec_bits <= MAX_PREC:
            raise UsageError(f"precision must lie in [{MIN_PREC}, {MAX_PREC}] bits")
        if getattr(args, "box", 1) < 1:
            raise UsageError("--box must be at least 1")
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cubic-thue: error: {exc}", file=sys.stderr)
        return 2

    try:
        result = args.func(args)
    except (ThueError, ValueError, ArithmeticError) as exc:
        code = exc.code if isinstance(exc, ThueError) else type(exc).__name__
        detail = exc.detail if isinstance(exc, ThueError) else str(exc)
        _emit({"error": code, "detail": detail}, "json", out)
        return 1

    if args.command == "verify-corpus":
        if args.output == "json":
            _emit([r.to_json() for r in result], "json", out)
        else:
            out.write(corpus.render(result))
        return 0 if all(r.passed for r in result) else 1
    _emit(result, args.output or "json", out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

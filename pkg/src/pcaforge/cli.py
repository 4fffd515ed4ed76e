"""Command-line front end.

Exit codes: 0 for a positive verdict, 1 for a negative one, 2 when the
budget or the approximate fragment left the question open, 3 for usage or
parse errors.  The machine output format emits one s-expression per result
and round-trips through the model file reader.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import modelio, sexpr
from .gadgets import (
    AtomProbeReport,
    GadgetError,
    HaltingProfile,
    atom_preservation_probe,
    build_halt_detector,
    build_stage_indicator,
    build_stage_loop,
    build_stage_stepper,
    build_staged_probe,
    build_tagged_detector,
    probe_type1,
    probe_type2_identity,
)
from .reduction import BudgetExhausted, ReductionError, format_trace, red, trace
from .selftest import run_suites
from .stdlib import StdlibError, bracket_abstract
from .syntax import ParseError, parse, parse_perm, render
from .terms import TermError, apply_automorphism, perm_compose, perm_invert
from .realizability import (
    ModelError,
    Verdict,
    check,
    check0_gamma,
    check0_ip,
    key_collision_check,
)

DEFAULT_CAP = 100_000

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


def _cap_default() -> int:
    from_env = os.environ.get("PCA_FORGE_CAP")
    if from_env:
        try:
            return int(from_env)
        except ValueError:
            pass
    return DEFAULT_CAP


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pcaforge",
        description="Workbench for the term algebra, its stage machines, and "
        "the finite-rank realizability models.",
    )
    top.add_argument("--cap", type=int, default=None, help="reduction budget")
    top.add_argument("--format", choices=("text", "machine"), default="text")
    sub = top.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="reduce a term")
    p_eval.add_argument("term")
    p_eval.add_argument("--trace", action="store_true")

    p_abs = sub.add_parser("abstract", help="bracket-abstract a variable out of a term")
    p_abs.add_argument("var", help="variable token, e.g. x0")
    p_abs.add_argument("term")

    p_perm = sub.add_parser("perm", help="permutation operations")
    perm_sub = p_perm.add_subparsers(dest="perm_op", required=True)
    pc = perm_sub.add_parser("compose", help="apply the second, then the first")
    pc.add_argument("first")
    pc.add_argument("second")
    pi = perm_sub.add_parser("invert")
    pi.add_argument("perm")
    pa = perm_sub.add_parser("apply", help="act on a term by the induced automorphism")
    pa.add_argument("perm")
    pa.add_argument("term")

    p_gadget = sub.add_parser("gadget", help="stage machines and probes")
    gadget_sub = p_gadget.add_subparsers(dest="gadget_op", required=True)
    gb = gadget_sub.add_parser("build")
    gb.add_argument("kind", choices=("g", "u", "v", "t", "tprime", "f"))
    gb.add_argument("--profile", required=True, help="halts@K or never")
    gb.add_argument("--m", type=int, default=0, help="machine label")
    gb.add_argument("--atom", type=int, default=1)
    gb.add_argument("--perm", default="[]", help="oracle permutation")
    gp1 = gadget_sub.add_parser("probe", help="bounded class membership probes")
    gp1.add_argument("kind", choices=("type1", "type2id", "atoms"))
    gp1.add_argument("--term", help="subject term")
    gp1.add_argument("--probe", action="append", default=[], help="probe terms (type2id)")
    gp1.add_argument("--bound", type=int, default=20)
    gp1.add_argument("--profile", default="halts@0")
    gp1.add_argument("--m", type=int, default=0)
    gp1.add_argument("--atom", type=int, default=5)
    gp1.add_argument("--perm", default="[]")
    gp1.add_argument("--perm2", default="[5->6,6->5]")

    p_realize = sub.add_parser("realize", help="file-driven realizability checks")
    p_realize.add_argument("--file", required=True)

    p_self = sub.add_parser("selftest", help="run the built-in invariant suites")
    p_self.add_argument("--suite", action="append", default=[])
    p_self.add_argument("--profile", default=None)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    cap = args.cap if args.cap is not None else _cap_default()
    try:
        return _dispatch(args, cap)
    except (ParseError, TermError, GadgetError, ModelError, StdlibError, ReductionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args: argparse.Namespace, cap: int) -> int:
    if args.command == "eval":
        return _cmd_eval(args, cap)
    if args.command == "abstract":
        return _cmd_abstract(args)
    if args.command == "perm":
        return _cmd_perm(args)
    if args.command == "gadget":
        return _cmd_gadget(args, cap)
    if args.command == "realize":
        return _cmd_realize(args, cap)
    if args.command == "selftest":
        return _cmd_selftest(args)
    raise AssertionError(f"unhandled command {args.command}")


def _emit_term(t, args) -> None:
    if args.format == "machine":
        print(sexpr.dumps([sexpr.Symbol("term"), render(t, sugar=False)]))
    else:
        print(render(t))


def _cmd_eval(args: argparse.Namespace, cap: int) -> int:
    term = parse(args.term)
    if args.trace:
        for line in format_trace(trace(term, cap)):
            print(line)
    outcome = red(term, cap)
    if isinstance(outcome, BudgetExhausted):
        if args.format == "machine":
            print(sexpr.dumps([sexpr.Symbol("budget-exhausted"), cap]))
        else:
            print(f"BUDGET-EXHAUSTED({cap})")
        return EXIT_UNKNOWN
    _emit_term(outcome.value, args)
    return EXIT_OK


def _cmd_abstract(args: argparse.Namespace) -> int:
    if not args.var.startswith("x") or not args.var[1:].isdigit():
        raise ParseError("variables are written x<index>", 0)
    term = bracket_abstract(int(args.var[1:]), parse(args.term))
    _emit_term(term, args)
    return EXIT_OK


def _cmd_perm(args: argparse.Namespace) -> int:
    if args.perm_op == "compose":
        out = perm_compose(parse_perm(args.first), parse_perm(args.second))
        print(str(out))
        return EXIT_OK
    if args.perm_op == "invert":
        print(str(perm_invert(parse_perm(args.perm))))
        return EXIT_OK
    image = apply_automorphism(parse_perm(args.perm), parse(args.term))
    _emit_term(image, args)
    return EXIT_OK


def _cmd_gadget(args: argparse.Namespace, cap: int) -> int:
    profile = HaltingProfile.from_spec(args.profile)
    if args.gadget_op == "build":
        builders = {
            "g": lambda: build_stage_indicator(profile, args.m),
            "u": lambda: build_stage_stepper(profile, args.m),
            "v": lambda: build_stage_loop(profile, args.m),
            "t": lambda: build_halt_detector(profile, args.m),
            "tprime": lambda: build_tagged_detector(profile, args.m, args.atom),
            "f": lambda: build_staged_probe(profile, args.m, args.atom, parse_perm(args.perm)),
        }
        _emit_term(builders[args.kind](), args)
        return EXIT_OK
    # probes
    if args.kind == "type1":
        if not args.term:
            raise GadgetError("type1 probes need --term")
        report = probe_type1(parse(args.term), args.bound, cap)
        return _emit_probe(report, args)
    if args.kind == "type2id":
        if not args.term or not args.probe:
            raise GadgetError("type2id probes need --term and at least one --probe")
        report = probe_type2_identity(
            parse(args.term), [parse(p) for p in args.probe], args.bound, cap
        )
        return _emit_probe(report, args)
    subject = parse(args.term) if args.term else bracket_abstract(0, _var0())
    report = atom_preservation_probe(
        subject,
        profile,
        args.m,
        args.atom,
        parse_perm(args.perm),
        parse_perm(args.perm2),
        cap,
    )
    return _emit_atom_report(report, args)


def _var0():
    from .terms import Var

    return Var(0)


def _emit_probe(report, args) -> int:
    if args.format == "machine":
        form = [
            sexpr.Symbol("probe"),
            sexpr.Symbol(report.verdict),
            [sexpr.Symbol("bound"), report.bound],
            [sexpr.Symbol("budget"), report.budget],
        ]
        if report.witness is not None:
            form.append([sexpr.Symbol("witness"), report.witness[0], report.witness[1]])
        print(sexpr.dumps(form))
    else:
        print(f"{report.verdict} bound={report.bound} budget={report.budget}")
        if report.witness is not None:
            print(f"witness: input #{report.witness[0]}: {report.witness[1]}")
    return EXIT_OK if report.consistent else EXIT_NEGATIVE


def _emit_atom_report(report: AtomProbeReport, args) -> int:
    if args.format == "machine":
        print(
            sexpr.dumps(
                [
                    sexpr.Symbol("atom-probe"),
                    [sexpr.Symbol("reduced"), sexpr.Symbol(str(report.reduced).lower())],
                    [sexpr.Symbol("atom-present"), sexpr.Symbol(str(report.atom_present).lower())],
                    [
                        sexpr.Symbol("variants-equal"),
                        sexpr.Symbol(str(report.variants_equal).lower()),
                    ],
                ]
            )
        )
    else:
        print(
            f"reduced={report.reduced} atom-present={report.atom_present} "
            f"variants-equal={report.variants_equal} atoms={sorted(report.atoms_in_value)}"
        )
    if not report.reduced:
        return EXIT_UNKNOWN
    return EXIT_OK


def _cmd_realize(args: argparse.Namespace, cap: int) -> int:
    with open(args.file, "r", encoding="utf-8") as handle:
        text = handle.read()
    requests = modelio.load_requests(text)
    if not requests:
        raise ModelError("no check requests in file")
    worst = EXIT_OK
    for request in requests:
        if isinstance(request, modelio.CollisionRequest):
            realizer = _realizer_value(request.equality_realizer, cap)
            key = _realizer_value(request.shared_key, cap)
            if realizer is None or key is None:
                verdict = Verdict("unknown", "budget", f"realizer term within cap {cap}")
            else:
                verdict = key_collision_check(request.left, request.right, realizer, key, cap)
        else:
            relation = {"check": check, "check0g": check0_gamma, "check0ip": check0_ip}[
                request.relation
            ]
            realizer = _realizer_value(request.realizer, cap)
            if realizer is None:
                verdict = Verdict("unknown", "budget", f"realizer term within cap {cap}")
            else:
                verdict = relation(realizer, request.formula, cap)
        if args.format == "machine":
            print(sexpr.dumps(modelio.encode_verdict(verdict)))
        else:
            print(str(verdict))
        worst = max(worst, _verdict_exit(verdict))
    return worst


def _realizer_value(text: str, cap: int):
    """Realizer strings denote elements: reduce the written term first."""
    return red(parse(text), cap).value_or_none()


def _verdict_exit(verdict: Verdict) -> int:
    if verdict.realized:
        return EXIT_OK
    if verdict.not_realized:
        return EXIT_NEGATIVE
    return EXIT_UNKNOWN


def _cmd_selftest(args: argparse.Namespace) -> int:
    profile = HaltingProfile.from_spec(args.profile) if args.profile else None
    results = run_suites(args.suite or None, profile)
    if not results:
        print("error: no such suite", file=sys.stderr)
        return EXIT_USAGE
    failed = False
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
        failed = failed or not result.passed
    return EXIT_NEGATIVE if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

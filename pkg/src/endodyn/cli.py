"""Command-line interface: analyze, census, realize, graph, verify.

Exit codes: 0 success, 1 a theorem or formula check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import verify as suites
from .census import brute_force_census, formula_count
from .dynamics import Fdg, fitting_check
from .groups import GroupError
from .realization import realize
from .serialize import dumps, fdg_from_dict, fdg_to_dict, load_fdg
from .state_graph import (
    build_state_space,
    canonical_invariant,
    cycle_multiset,
    kernel_index_check,
    rigid_procreation_check,
    to_dot,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ENDODYN_JOBS", "1")))
    except ValueError:
        return 1


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {output}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _fmt_seq(seq) -> str:
    return "(" + ", ".join(map(str, seq)) + ")"


def _fmt_cycles(cycles) -> str:
    return "[" + ", ".join(f"({length},{mult})" for length, mult in cycles) + "]"


def _load(args) -> Fdg:
    if args.input:
        try:
            return load_fdg(args.input)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
    if args.n is None or args.a is None:
        raise InputError("give --input PATH or both --n and --a")
    return fdg_from_dict({"type": "cyclic", "n": args.n, "a": args.a})


def cmd_analyze(args) -> int:
    F = _load(args)
    S = build_state_space(F)
    fitting = fitting_check(F)
    kernel = kernel_index_check(F, S)
    rigid = rigid_procreation_check(S)
    cycles = cycle_multiset(S)
    inv = canonical_invariant(F, S)
    ok = fitting.passed and kernel.passed and rigid.ok
    report = {
        "order": F.order,
        "spec": fdg_to_dict(F),
        "fitting": fitting.as_dict(),
        "behavior": list(inv.identity_behavior),
        "kernelIndex": kernel.as_dict(),
        "rigid": {"ok": rigid.ok, "witness": list(rigid.witness) if rigid.witness else None},
        "cycles": [list(c) for c in cycles],
        "invariant": inv.as_dict(),
        "ok": ok,
    }
    if args.format == "json":
        text = dumps(report)
    else:
        lines = [
            f"order: {F.order}",
            f"nil: {fitting.nil_order}",
            f"per: {fitting.per_order}",
            f"fitting decomposition: {'passed' if fitting.passed else 'FAILED'}"
            f" (kernel chain stabilizes at {fitting.stabilization_index_kernel},"
            f" image chain at {fitting.stabilization_index_image})",
        ]
        if fitting.nil_normal is not None:
            lines.append(f"nil normal: {'confirmed' if fitting.nil_normal else 'NO'}")
        lines += [
            f"behavior: {_fmt_seq(inv.identity_behavior)}",
            f"kernel sizes: {_fmt_seq(kernel.kernel_sizes)}",
            f"kernel-index law: {'passed' if kernel.passed else 'FAILED'}",
            f"rigid procreation: {'passed' if rigid.ok else f'FAILED at {rigid.witness}'}",
            f"cycles: {_fmt_cycles(cycles)}",
            f"invariant: behavior {_fmt_seq(inv.identity_behavior)}, cycles {_fmt_cycles(inv.cycles)}",
        ]
        if not ok:
            lines.append("reproducer: " + dumps(fdg_to_dict(F)).strip().replace("\n", " "))
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_VIOLATION


def _census_range(args) -> int:
    mismatches = []
    for n in range(1, args.max_n + 1):
        report = brute_force_census(n, jobs=args.jobs)
        if not report.agrees:
            mismatches.append(report.as_dict())
    if args.format == "json":
        text = dumps({"maxN": args.max_n, "agree": not mismatches, "mismatches": mismatches})
    else:
        lines = [
            f"n={m['n']}: formula {m['formula']} != brute force {m['bruteForce']}" for m in mismatches
        ]
        verdict = "all agree" if not mismatches else f"{len(mismatches)} mismatch(es)"
        lines.append(f"census 1..{args.max_n}: formula vs brute force, {verdict}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if not mismatches else EXIT_VIOLATION


def cmd_census(args) -> int:
    if args.max_n is not None:
        if args.max_n < 1:
            raise InputError("--max-n must be positive")
        return _census_range(args)
    if args.n is None:
        raise InputError("give --n or --max-n")
    if args.n < 1:
        raise InputError("--n must be positive")
    if args.brute_force:
        report = brute_force_census(args.n, jobs=args.jobs)
    else:
        from .census import CensusReport

        report = CensusReport(args.n, formula_count(args.n))
    if args.format == "json":
        text = dumps(report.as_dict())
    else:
        f = report.formula
        lines = [
            f"n = {args.n}",
            f"formula: total {f.total}, trees {f.trees}, cycle unions {f.cycle_unions}, mixed {f.mixed}",
        ]
        if f.overlap:
            lines.append("overlap: the single class is both a tree and a cycle union")
        if report.brute_force is not None:
            b = report.brute_force
            lines.append(
                f"brute force: total {b.total}, trees {b.trees}, cycle unions {b.cycle_unions}, mixed {b.mixed}"
            )
            lines.append(f"{f.total} {'=' if report.agrees else '!='} {b.total}")
            for c in report.classes:
                lines.append(
                    f"  a={c.rep}: behavior {_fmt_seq(c.invariant.identity_behavior)},"
                    f" cycles {_fmt_cycles(c.invariant.cycles)}, size {c.size}"
                )
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_VIOLATION if report.agrees is False else EXIT_OK


def cmd_realize(args) -> int:
    try:
        chain = [int(x) for x in args.chain.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"--chain must be comma-separated integers: {args.chain}") from exc
    F = realize(chain)
    S = build_state_space(F)
    inv = canonical_invariant(F, S)
    expected = tuple(c for c in chain)
    while expected and expected[-1] == 1:
        expected = expected[:-1]
    verified = inv.identity_behavior == expected and inv.cycles == ((1, 1),)
    spec = fdg_to_dict(F)
    if args.output:
        _emit(dumps(spec), args.output)
    if args.format == "json":
        text = dumps({"spec": spec, "behavior": list(inv.identity_behavior), "verified": verified})
    else:
        lines = [
            f"group: {tuple(F.group.orders)}",
            f"matrix: {F.endo.matrix.tolist()}",
            f"behavior: {_fmt_seq(inv.identity_behavior)}",
            f"periodic part: {_fmt_cycles(inv.cycles)}",
            "verified" if verified else "NOT verified",
        ]
        text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    return EXIT_OK if verified else EXIT_VIOLATION


def cmd_graph(args) -> int:
    F = _load(args)
    _emit(to_dot(build_state_space(F), labels=args.labels), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.budget < 0:
        raise InputError("--budget must be non-negative")
    results = suites.run_all(args.seed, args.budget, jobs=args.jobs)
    ok = all(r.ok for r in results)
    if args.format == "json":
        text = dumps({"seed": args.seed, "budget": args.budget, "ok": ok, "suites": [r.as_dict() for r in results]})
    else:
        lines = []
        for r in results:
            status = "PASS" if r.ok else "FAIL"
            note = f" [{r.note}]" if r.note else ""
            lines.append(f"{status} {r.name}: {r.checked} checked, {r.violations} violations{note}")
            for rep in r.failures:
                lines.append("  reproducer: " + dumps(rep).strip().replace("\n", " "))
        lines.append(f"{'all suites passed' if ok else 'VIOLATIONS FOUND'} (seed {args.seed}, budget {args.budget})")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("text", "json"), default="text")
    shared.add_argument("--output", metavar="PATH")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--jobs", type=int, default=_default_jobs(), help="worker processes (env ENDODYN_JOBS)")

    parser = argparse.ArgumentParser(prog="endodyn", description="Dynamics of endomorphisms of finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("--input", metavar="PATH", help="group/endomorphism JSON file")
        p.add_argument("--n", type=int, help="order of the cyclic group Z/n")
        p.add_argument("--a", type=int, help="stretch factor of x -> a*x")
        return p

    p = with_input(sub.add_parser("analyze", parents=[shared], help="structure checks for one FDG"))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("census", parents=[shared], help="count state-space types of stretch maps")
    p.add_argument("--n", type=int)
    p.add_argument("--max-n", type=int, help="sweep 1..MAX_N against brute force")
    p.add_argument("--brute-force", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("realize", parents=[shared], help="abelian FDG with a given identity behavior")
    p.add_argument("--chain", required=True, help="comma-separated divisor chain, e.g. 4,2")
    p.set_defaults(func=cmd_realize)

    p = with_input(sub.add_parser("graph", parents=[shared], help="state space as DOT"))
    p.add_argument("--labels", action="store_true", help="label nodes with group elements")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("verify", parents=[shared], help="run the verification suites")
    p.add_argument("--budget", type=int, default=100, help="size of each seeded random suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GroupError, ValueError) as exc:
        print(f"endodyn {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

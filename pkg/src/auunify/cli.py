"""Command line front end.

Exit status: 0 on success, 1 on parse or verification failure, 2 when an
input violates a precondition (not simple, not linear, not a unifier, ...).
"""

from __future__ import annotations

import argparse
import sys

from .dot import tree_to_dot
from .engine import make_problem, minimize, solve_system, unify
from .errors import InputError, ParseError, SearchLimitExceeded, VerificationError
from .oracle import GroundConfig, check_completeness
from .selector import select, verify_selection
from .syntax import format_substitution, parse_problem, parse_substitution

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION = 0, 1, 2


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str):
    return parse_problem(_read(path))


def _single(pf, command: str):
    if len(pf.equations) != 1:
        raise InputError(f"{command} needs exactly one equation, found {len(pf.equations)}")
    return pf.equations[0]


def cmd_solve(args, out) -> int:
    pf = _load(args.file)
    if len(pf.equations) == 1:
        result, _ = unify(*pf.equations[0])
    else:
        result = solve_system(pf.equations)
    if args.minimize:
        result = minimize(result)
    unifiers = list(result)
    if args.max_solutions is not None:
        unifiers = unifiers[: args.max_solutions]
    for s in unifiers:
        print(format_substitution(s), file=out)
    return EXIT_OK


def cmd_trace(args, out) -> int:
    lhs, rhs = _single(_load(args.file), "trace")
    _, tree = unify(lhs, rhs)
    text = tree_to_dot(tree)
    if args.dot == "-":
        out.write(text)
    else:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(
            f"{len(tree)} nodes, {len(tree.solved_leaves())} solved, "
            f"{len(tree.failed_leaves())} failed, {len(tree.dead_ends())} dead ends",
            file=out,
        )
    return EXIT_OK


def cmd_check(args, out) -> int:
    pf = _load(args.file)
    lhs, rhs = _single(pf, "check")
    delta = parse_substitution(args.unifier, pf.vars)
    p = make_problem(lhs, rhs)
    seq = select(p.lhs, p.rhs, delta)
    print("path: " + str(seq), file=out)
    print("cases: " + " ".join(seq.cases), file=out)
    sigma, witness = verify_selection(p, seq, delta)
    print("sigma: " + format_substitution(sigma), file=out)
    print("lambda: " + format_substitution(witness.instantiation), file=out)
    return EXIT_OK


def _csv(text: str, conv):
    return tuple(conv(t.strip()) for t in text.split(",") if t.strip())


def cmd_oracle(args, out) -> int:
    pf = _load(args.file)
    cfg = GroundConfig(
        int_pool=_csv(args.ints, int), str_pool=_csv(args.strs, str), max_list_len=args.maxlen
    )
    status = EXIT_OK
    for i, (lhs, rhs) in enumerate(pf.equations, start=1):
        result, _ = unify(lhs, rhs)
        verdict = check_completeness(result, lhs, rhs, cfg)
        if verdict:
            print(f"equation {i}: complete ({verdict.checked} ground unifiers checked)", file=out)
        else:
            print(
                f"equation {i}: incomplete, uncovered ground unifier "
                f"{format_substitution(verdict.counterexample)}",
                file=out,
            )
            status = EXIT_FAIL
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="auunify", description="Unification of simple list expressions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="print a complete set of unifiers")
    p.add_argument("file")
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--max-solutions", type=int, metavar="N")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", help="write the derivation tree as DOT")
    p.add_argument("file")
    p.add_argument("--dot", required=True, metavar="OUT", help="output path, or - for stdout")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("check", help="select and verify the path covering a unifier")
    p.add_argument("file")
    p.add_argument("--unifier", required=True, metavar="TEXT")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="brute-force completeness check")
    p.add_argument("file")
    p.add_argument("--ints", default="1,2")
    p.add_argument("--strs", default="a")
    p.add_argument("--maxlen", type=int, default=2)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAIL
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=err)
        return EXIT_FAIL
    except (InputError, SearchLimitExceeded) as exc:
        print(f"precondition violated: {exc}", file=err)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())

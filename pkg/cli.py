#!/usr/bin/env python3
"""
Command-line front end for the recfun toolkit.

Usage:
    python cli.py eval "monus(5,3)"
    python cli.py binom 4 2
    python cli.py height "pow2(pow2(x))" --tower exp2
    python cli.py genfn brute --predicate lt --y 3
    python cli.py fom verify data/fom/majority.fom --word 1101
    python cli.py minsky verify data/machines/inc.mm --box 0..10 --time-poly "x+2"
    python cli.py perm verify --suite rolall --n 2
    python cli.py suite all --seed 7 --json

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 budget exceeded. With --json every natural number is printed as a
decimal string.
"""

import argparse
import itertools
import json
import logging
import sys

import fomlogic
import formula
import genfn
import minskyq
from errors import (
    BudgetError,
    HypothesisViolation,
    RecfunError,
    TimeBoundError,
    VerificationError,
)
from settings import current, override
from suites import FUNCTION_CORPUS, GEN_CORPUS, PERM_SUITES, SUITES, run_suites

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class _Usage(Exception):
    pass


def _emit(args, human: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _Usage(f"expected comma-separated numbers, got {text!r}") from None
    if any(v < 0 for v in values):
        raise _Usage("numbers must be non-negative")
    return values


def _env(text: str | None) -> dict[str, int]:
    env = {}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep or not value.strip().isdigit():
            raise _Usage(f"expected k=v with a natural number, got {item!r}")
        env[key.strip()] = int(value)
    return env


def _box(text: str, tapes: int) -> list[range]:
    ranges = []
    for part in text.split(","):
        lo, sep, hi = part.partition("..")
        if not sep or not lo.isdigit() or not hi.isdigit() or int(lo) > int(hi):
            raise _Usage(f"expected a box like 0..10 or 0..4,0..4, got {text!r}")
        ranges.append(range(int(lo), int(hi) + 1))
    if len(ranges) == 1:
        ranges *= tapes
    if len(ranges) != tapes:
        raise _Usage(f"box has {len(ranges)} ranges for {tapes} tapes")
    return ranges


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    value = formula.evaluate(formula.parse(args.expr), _env(args.env))
    _emit(args, str(value), {"value": str(value)})
    return EXIT_OK


def cmd_height(args) -> int:
    h = formula.exp_height(formula.parse(args.expr), args.tower)
    _emit(args, f"{h.tower} height {h.height}", {"tower": h.tower, "height": str(h.height)})
    return EXIT_OK


def cmd_binom(args) -> int:
    value = formula.evaluate(formula.binomial_formula(), {"x": args.x, "y": args.y})
    _emit(args, str(value), {"value": str(value)})
    return EXIT_OK


def _predicate(name: str) -> genfn.GenPredicate:
    if name not in GEN_CORPUS:
        raise _Usage(f"unknown predicate {name!r}; choose from {', '.join(GEN_CORPUS)}")
    return GEN_CORPUS[name]


def cmd_genfn(args) -> int:
    if args.action == "brute":
        value = genfn.genfn_bruteforce(_predicate(args.predicate), args.y)
        _emit(args, str(value), {"value": str(value)})
        return EXIT_OK
    if args.action == "count":
        psi = _predicate(args.predicate)
        poly = genfn.Polynomial.parse(args.poly, psi.arity)
        value = genfn.gen_count(psi, poly, args.z)
        expected = genfn.genfn_bruteforce(genfn.count_predicate(psi, poly), args.z)
        if value != expected:
            raise VerificationError("gen_count", args.z, expected, value)
        _emit(args, str(value), {"value": str(value)})
        return EXIT_OK
    if args.function not in FUNCTION_CORPUS:
        raise _Usage(f"unknown function {args.function!r}; choose from {', '.join(FUNCTION_CORPUS)}")
    fn, arity, bound_text = FUNCTION_CORPUS[args.function]
    values = tuple(_int_list(args.args or ""))
    if len(values) != arity:
        raise _Usage(f"{args.function} takes {arity} argument(s)")
    graph = genfn.bit_graph(fn, arity, args.function)
    bound = genfn.Polynomial.parse(bound_text, arity)
    value = genfn.xs_extract(lambda z: genfn.genfn_bruteforce(graph, z), bound, values)
    if value != fn(*values):
        raise VerificationError(f"xs_extract {args.function}", values, fn(*values), value)
    _emit(args, str(value), {"value": str(value)})
    return EXIT_OK


def cmd_fom(args) -> int:
    with open(args.file) as f:
        phi = fomlogic.parse_fom(f.read())
    m = max(fomlogic.free_vars(phi), default=0)
    word = args.word
    if args.action == "eval":
        ys = _int_list(args.assign or "")
        truth = fomlogic.eval_formula(phi, fomlogic.WordModel(word, {i + 1: y for i, y in enumerate(ys)}))
        _emit(args, str(truth).lower(), {"value": truth})
        return EXIT_OK
    table = fomlogic.compile_fom(phi, m)
    value = table.table_for(word)
    if args.action == "compile":
        _emit(args, str(value), {"arity": str(m), "table": str(value)})
        return EXIT_OK
    checked = 0
    for ys in itertools.product(range(1, len(word) + 1), repeat=m):
        model = fomlogic.WordModel(word, {i + 1: y for i, y in enumerate(ys)})
        want = fomlogic.eval_formula(phi, model)
        got = table.truth(word, ys)
        if got != want:
            raise VerificationError("compiled table", (word, ys), want, got)
        checked += 1
    _emit(args, f"ok ({checked} assignments)", {"ok": True, "checks": str(checked)})
    return EXIT_OK


def _time_poly(args, m: minskyq.Machine) -> genfn.Polynomial:
    if not args.time_poly:
        raise _Usage(f"minsky {args.action} needs --time-poly")
    return genfn.Polynomial.parse(args.time_poly, m.tapes)


def cmd_minsky(args) -> int:
    m = minskyq.load_machine(args.file)
    if args.action == "run":
        result, steps = minskyq.run(m, _int_list(args.input or ""), args.max_steps)
        _emit(args, f"{result} ({steps} steps)", {"result": str(result), "steps": str(steps)})
        return EXIT_OK
    poly = _time_poly(args, m)
    if args.action == "compile":
        inputs = _int_list(args.input or "")
        params, extract = minskyq.compile(m, inputs, poly)
        value = extract(minskyq.q_eval(params))
        payload = {**params.to_json(), "result": str(value)}
        _emit(args, "\n".join(f"{k} = {v}" for k, v in payload.items()), payload)
        return EXIT_OK
    if not args.box:
        raise _Usage("minsky verify needs --box")
    checked = 0
    for inputs in itertools.product(*_box(args.box, m.tapes)):
        want, _ = minskyq.run(m, inputs, args.max_steps)
        params, extract = minskyq.compile(m, inputs, poly)
        got = extract(minskyq.q_eval(params))
        if got != want:
            raise VerificationError("Q simulation", inputs, want, got)
        checked += 1
    _emit(args, f"ok ({checked} inputs)", {"ok": True, "checks": str(checked)})
    return EXIT_OK


def _report(args, reports) -> int:
    if args.json:
        print(json.dumps([r.to_json() for r in reports], sort_keys=True))
    else:
        for r in reports:
            print(r.line())
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY


def cmd_perm(args) -> int:
    options = {k: v for k, v in (("n", args.n), ("prefix", args.prefix)) if v is not None}
    return _report(args, run_suites([args.suite], args.seed, **options))


def cmd_suite(args) -> int:
    names = list(SUITES) if args.name == "all" else [args.name]
    return _report(args, run_suites(names, args.seed))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized suites")
    common.add_argument("--path", choices=["auto", "formula", "oracle"], default=None,
                        help="Force the combinator path")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(description="Recursive function toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="Evaluate a formula")
    p.add_argument("expr")
    p.add_argument("--env", help="Variable values, k=v,...")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("height", parents=[common], help="Exponent height of a formula")
    p.add_argument("expr")
    p.add_argument("--tower", choices=list(formula.TOWERS), default="exp2")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("binom", parents=[common], help="Binomial coefficient by the closed formula")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.set_defaults(func=cmd_binom)

    p = sub.add_parser("genfn", parents=[common], help="Generating functions")
    p.add_argument("action", choices=["brute", "count", "extract"])
    p.add_argument("--predicate", default="lt")
    p.add_argument("--y", type=int, default=3)
    p.add_argument("--z", type=int, default=3)
    p.add_argument("--poly", default="x + 1", help="Count bound polynomial")
    p.add_argument("--function", default="identity")
    p.add_argument("--args", help="Arguments for extract, a,b,...")
    p.set_defaults(func=cmd_genfn)

    p = sub.add_parser("fom", parents=[common], help="FO[M] formulas")
    p.add_argument("action", choices=["eval", "compile", "verify"])
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.add_argument("--assign", help="Positions for y1,y2,...")
    p.set_defaults(func=cmd_fom)

    p = sub.add_parser("minsky", parents=[common], help="Minsky machines and Q")
    p.add_argument("action", choices=["run", "compile", "verify"])
    p.add_argument("file")
    p.add_argument("--input", help="Inputs a,b,...")
    p.add_argument("--time-poly", help="Running-time bound polynomial")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--box", help="Input box, e.g. 0..10 or 0..4,0..4")
    p.set_defaults(func=cmd_minsky)

    p = sub.add_parser("perm", parents=[common], help="Permutation group suites")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--suite", choices=list(PERM_SUITES), required=True)
    p.add_argument("--n", type=int, default=None, help="Number of triples for rolall")
    p.add_argument("--prefix", type=int, default=None)
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("suite", parents=[common], help="Property suites")
    p.add_argument("name", choices=["all", *SUITES])
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {"path": args.path} if args.path else {}
    try:
        if args.seed is None:
            args.seed = current().seed
        with override(**overrides):
            return args.func(args)
    except BudgetError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (VerificationError, HypothesisViolation, TimeBoundError) as e:
        print(f"Verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except RecfunError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except (_Usage, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Every command prints one verdict line on stdout, optionally followed by a
witness block.  Exit status: 0 positive verdict, 1 negative verdict
(unsatisfiable, empty, fails), 2 bad input.
"""

from __future__ import annotations

import argparse
import random
import sys
import warnings

from .automata import find_accepting_run_bounded, is_empty, validate_automaton
from .bnf import validate_clause_set
from .encode import MODES, SUCCESSOR, EmptyInitial, LabelConflict, characteristic_clause_set
from .generate import random_automaton, random_clause_set, random_unsat_clause_set
from .modelcheck import (
    BudgetExceeded, UnknownIndex, check_clause_set, enumerate_models, validate_model,
)
from .tableau import decide, dump_tableau, extract_automaton, extract_model
from .textio import (
    ParseError, looks_like_automaton, parse_automaton, parse_clauses, parse_model,
    print_automaton, print_clauses, print_model,
)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e


def _automaton(path: str):
    a = parse_automaton(_read(path))
    report = validate_automaton(a)
    if report.errors:
        raise InputError(f"{path}: " + "; ".join(report.errors))
    return a


def _clauses(path: str):
    cs = parse_clauses(_read(path))
    report = validate_clause_set(cs)
    if report.errors:
        raise InputError(f"{path}: " + "; ".join(report.errors))
    return cs


def _show_run(a, run) -> str:
    lines = []
    for n in run.nodes:
        t = run.move[n]
        kids = " ".join(str(k) for k in run.children[n])
        sym = "{" + ", ".join(sorted(t.symbol)) + "}"
        lines.append(f"node {n} {run.label[n]} {sym} {t.degree} -> {kids}")
    return "\n".join(lines)


def _decide(cs, args):
    aug, t, rt = decide(cs)
    if args.dump_tableau:
        print(dump_tableau(t), file=sys.stderr)
    return aug, rt


def cmd_a2bnf(args) -> int:
    a = _automaton(args.automaton)
    try:
        cs = characteristic_clause_set(a, args.tran_mode)
    except EmptyInitial as e:
        print(f"empty: {e}")
        return 1
    sys.stdout.write(print_clauses(cs))
    return 0


def cmd_bnf2a(args) -> int:
    cs = _clauses(args.clauses)
    aug, rt = _decide(cs, args)
    if not rt.roots:
        print("unsatisfiable: empty reduced tableau")
        return 1
    print("satisfiable")
    sys.stdout.write(print_automaton(extract_automaton(rt, aug)))
    return 0


def cmd_sat(args) -> int:
    cs = _clauses(args.clauses)
    _, rt = _decide(cs, args)
    if not rt.roots:
        print("unsatisfiable")
        return 1
    print("satisfiable")
    model = extract_model(rt)
    if args.max_model_states:
        try:
            small = enumerate_models(cs, args.max_model_states)
        except BudgetExceeded as e:
            print(f"# bounded search gave up: {e}", file=sys.stderr)
            small = None
        if small is not None:
            model = small
    sys.stdout.write(print_model(model))
    return 0


def cmd_empty(args) -> int:
    a = _automaton(args.automaton)
    if is_empty(a):
        print("empty")
        return 1
    print("non-empty")
    run = find_accepting_run_bounded(a, max(1, len(a.states)))
    if run is not None:
        print(_show_run(a, run))
    return 0


def cmd_mc(args) -> int:
    m = parse_model(_read(args.model))
    report = validate_model(m)
    if report.errors:
        raise InputError(f"{args.model}: " + "; ".join(report.errors))
    cs = _clauses(args.clauses)
    try:
        ok = check_clause_set(m, cs)
    except UnknownIndex as e:
        raise InputError(f"index {e.args[0]!r} is not defined by the model") from e
    print("holds" if ok else "fails")
    return 0 if ok else 1


def cmd_roundtrip(args) -> int:
    text = _read(args.input)
    if looks_like_automaton(text):
        a = _automaton(args.input)
        print(f"automaton: {'empty' if is_empty(a) else 'non-empty'}")
        try:
            cs = characteristic_clause_set(a, args.tran_mode)
        except EmptyInitial:
            print("clauses: none (no initial state)")
            return 1
    else:
        cs = _clauses(args.input)
    aug, rt = _decide(cs, args)
    print(f"clauses: {'satisfiable' if rt.roots else 'unsatisfiable'}")
    if not rt.roots:
        print("extracted: empty reduced tableau")
        return 1
    b = extract_automaton(rt, aug)
    verdict = is_empty(b)
    print(f"extracted: {'empty' if verdict else 'non-empty'} ({len(b.states)} states)")
    return 1 if verdict else 0


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    match args.kind:
        case "automaton":
            sys.stdout.write(print_automaton(random_automaton(rng)))
        case "clauses":
            sys.stdout.write(print_clauses(random_clause_set(rng)))
        case "unsat":
            sys.stdout.write(print_clauses(random_unsat_clause_set(rng)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treebnf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    def tran_mode(sp):
        sp.add_argument("--tran-mode", choices=MODES, default=SUCCESSOR,
                        help="how transitions are assigned to indices")

    def dump(sp):
        sp.add_argument("--dump-tableau", action="store_true",
                        help="write the unreduced tableau to stderr")

    sp = add("a2bnf", cmd_a2bnf, "characteristic clause set of an automaton")
    tran_mode(sp)
    sp.add_argument("automaton")
    sp = add("bnf2a", cmd_bnf2a, "automaton extracted from the reduced tableau")
    dump(sp)
    sp.add_argument("clauses")
    sp = add("sat", cmd_sat, "decide satisfiability of a clause set")
    dump(sp)
    sp.add_argument("--max-model-states", type=int, default=0,
                    help="prefer a witness found by exhaustive search up to N states")
    sp.add_argument("clauses")
    sp = add("empty", cmd_empty, "decide emptiness of an automaton")
    sp.add_argument("automaton")
    sp = add("mc", cmd_mc, "check a clause set against a finite model")
    sp.add_argument("model")
    sp.add_argument("clauses")
    sp = add("roundtrip", cmd_roundtrip, "automaton or clauses through the tableau and back")
    tran_mode(sp)
    dump(sp)
    sp.add_argument("input")
    sp = add("gen", cmd_gen, "print a random document")
    sp.add_argument("kind", choices=("automaton", "clauses", "unsat"))
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = args.func(args)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return code
    except (InputError, ParseError, LabelConflict) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

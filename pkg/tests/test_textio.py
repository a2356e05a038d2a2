import random

import pytest
from hypothesis import given, settings, strategies as st

from treebnf.automata import BuchiTreeAutomaton, Transition, symbol
from treebnf.bnf import (
    ASometime, AStep, ClauseSet, ESometime, EStep, Initial, Literal, RawClause, lit, lits,
)
from treebnf.formula import Atom, Not, Or
from treebnf.generate import random_automaton, random_clause_set, random_model
from treebnf.textio import (
    RESERVED, ParseError, looks_like_automaton, parse_automaton, parse_clause, parse_clauses,
    parse_model, print_automaton, print_clause, print_clauses, print_model,
)


# ------------------------------------------------------------------ clauses

@pytest.mark.parametrize("text, clause", [
    ("start => q1", Initial(lits("q1"))),
    ("u => E F <ind1> l", ESometime(lits("u"), lit("l"), "ind1")),
    ("p & q => A X (r | s)", AStep(lits("p", "q"), lits("r", "s"))),
    ("p => A X r", AStep(lits("p"), lits("r"))),
    ("T => E X <f> (~q | p)", EStep((), lits("~q", "p"), "f")),
    ("~p => A F ~q", ASometime(lits("~p"), lit("~q"))),
    ("start => F_", Initial(())),
    ("q => E X <ind2> (F_)", EStep(lits("q"), (), "ind2")),
    ("  start=>a|b   # trailing comment", Initial(lits("a", "b"))),
])
def test_parse_clause(text, clause):
    assert parse_clause(text) == clause


def test_classical_rhs_is_raw():
    assert parse_clause("v => ~p | r") == RawClause(Atom("v"), Or((Not(Atom("p")), Atom("r"))))


def test_parse_clauses_normalises_and_skips_comments():
    cs = parse_clauses("# header\n\nstart => q1\nv => p\n")
    assert cs.clauses == (Initial(lits("q1")), Initial(lits("p", "~v")), AStep((), lits("p", "~v")))


@pytest.mark.parametrize("text, line, column, fragment", [
    ("p => A Y q", 1, 6, "expected 'A X', 'E X', 'A F', 'E F'"),
    ("p => A F T", 1, 10, "sometime goal must be a literal"),
    ("p => A F (q & r)", 1, 10, "expected proposition"),
    ("p & T => A X q", 1, 1, "T may only stand alone"),
    ("start => q |", 1, 13, "proposition"),
    ("p => E X f (q)", 1, 10, "'<'"),
    ("p => A X (q", 1, 12, "')'"),
    ("start => q r", 1, 12, "end of line"),
    ("p $ q", 1, 3, ""),
])
def test_clause_errors(text, line, column, fragment):
    with pytest.raises(ParseError) as err:
        parse_clause(text)
    assert (err.value.line, err.value.column) == (line, column)
    assert fragment in str(err.value)
    assert str(err.value).startswith(f"line {line}, column {column}: ")


def test_error_line_numbers_in_documents():
    with pytest.raises(ParseError) as err:
        parse_clauses("start => p\n\np => A X (q\n")
    assert err.value.line == 3


def test_print_clause_shapes():
    assert print_clause(Initial(())) == "start => F_"
    assert print_clause(AStep((), lits("p"))) == "T => A X (p)"
    assert print_clause(ESometime(lits("a", "~b"), lit("c"), "f")) == "a & ~b => E F <f> c"


def test_print_clauses_header():
    cs = ClauseSet((EStep(lits("q1"), lits("q2"), "ind1"),))
    assert print_clauses(cs) == (
        "# propositions: q1 q2\n# indices: ind1\nq1 => E X <ind1> (q2)\n")
    assert print_clauses(cs, header=False) == "q1 => E X <ind1> (q2)\n"


names = st.from_regex(r"[a-z_][a-z0-9_]{0,4}", fullmatch=True).filter(
    lambda s: s not in RESERVED)
literals = st.builds(Literal, names, st.booleans())
conjs = st.lists(literals, max_size=3).map(tuple)
disjs = st.lists(literals, max_size=3).map(tuple)
clauses = st.one_of(
    st.builds(Initial, disjs),
    st.builds(AStep, conjs, disjs),
    st.builds(EStep, conjs, disjs, names),
    st.builds(ASometime, conjs, literals),
    st.builds(ESometime, conjs, literals, names),
)


@settings(max_examples=300, deadline=None)
@given(st.lists(clauses, max_size=6))
def test_clause_round_trip(cs):
    cs = ClauseSet(tuple(cs))
    assert parse_clauses(print_clauses(cs)) == cs


# ---------------------------------------------------------------- automata

def test_worked_example_document(worked):
    assert len(worked.transitions) == 4
    assert worked.transitions[0] == Transition("s0", symbol("p"), 2, ("s0", "s0"))
    assert worked.initial == ("s0",) and worked.accepting == ("s1",)
    assert parse_automaton(print_automaton(worked)) == worked
    assert looks_like_automaton(print_automaton(worked))
    assert not looks_like_automaton("start => p\n")


def test_empty_trans_section():
    a = parse_automaton("ALPHABET\n{p}\nDEGREES\n1\nSTATES\ns0\nINITIAL\ns0\nACCEPTING\ns0\nTRANS\n")
    assert a.transitions == ()


def test_empty_symbol_and_missing_optional_sections():
    a = parse_automaton("ALPHABET\n{} {p, r}\nDEGREES\n1 2\nSTATES\na b\n")
    assert a.alphabet == (frozenset(), symbol("p", "r"))
    assert a.degrees == (1, 2) and a.initial == () and a.labels is None


HEAD = "ALPHABET\n{p}\nDEGREES\n2\nSTATES\ns0 s1\nINITIAL\ns0\nACCEPTING\ns1\nTRANS\n"


@pytest.mark.parametrize("trans, line, column, fragment", [
    ("s0 , {p} , 2 -> (s0, s9)", 12, 22, "undeclared state 's9'"),
    ("s7 , {p} , 2 -> (s0, s0)", 12, 1, "undeclared state 's7'"),
    ("s0 , {r} , 2 -> (s0, s0)", 12, 6, "symbol ['r'] is not in the alphabet"),
    ("s0 , {p} , 3 -> (s0, s0, s0)", 12, 12, "degree 3 is not declared"),
    ("s0 , {p} , 2 -> (s0)", 12, 20, "tuple of length 1 under degree 2"),
    ("s0 , {p} , x -> (s0)", 12, 12, "degree"),
])
def test_automaton_errors(trans, line, column, fragment):
    with pytest.raises(ParseError) as err:
        parse_automaton(HEAD + trans + "\n")
    assert (err.value.line, err.value.column) == (line, column)
    assert fragment in str(err.value)


@pytest.mark.parametrize("text, fragment", [
    ("ALPHABET\n{p}\nALPHABET\n{r}\n", "section ALPHABET appears twice"),
    ("ALPHABET\n{p}\nSTATES\ns0\n", "missing section DEGREES"),
    ("s0\nALPHABET\n", "expected a section header"),
    ("ALPHABET\n{p}\nDEGREES\n0\nSTATES\ns0\n", "positive degree"),
    ("ALPHABET\n{p}\nDEGREES\n1\nSTATES\ns0\nINITIAL\ns1\n", "undeclared state 's1'"),
    ("ALPHABET\n{p}\nDEGREES\n1\nSTATES\ns0\nLABELS\nzz : {p}\n", "undeclared state 'zz'"),
])
def test_automaton_structure_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment.replace("[", r"\[")):
        parse_automaton(text)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.booleans())
def test_automaton_round_trip(seed, with_labels):
    rng = random.Random(seed)
    a = random_automaton(rng, max_states=4, label_consistent=False)
    if with_labels:
        a = BuchiTreeAutomaton(a.alphabet, a.degrees, a.states, a.transitions, a.initial,
                               a.accepting, {s: rng.choice(a.alphabet) for s in a.states})
    assert parse_automaton(print_automaton(a)) == a
    if with_labels:
        assert parse_automaton(print_automaton(a)).labels == a.labels


# ------------------------------------------------------------------- models

def test_model_document():
    m = parse_model("ROOT 0\nSTATE 0 : {p}\nSTATE 1 : {}\nSUCC f : 0 -> 1\nSUCC f : 1 -> 0\n")
    assert m.states == (0, 1) and m.root == 0
    assert m.valuation == {0: {"p"}, 1: frozenset()}
    assert m.succ == {"f": {0: 1, 1: 0}}


@pytest.mark.parametrize("text, fragment", [
    ("STATE 0 : {}\nSUCC f : 0 -> 0\n", "missing ROOT line"),
    ("ROOT 3\nSTATE 0 : {}\n", "undeclared state 3"),
    ("ROOT 0\nSTATE 0 : {}\nSUCC f : 0 -> 2\n", "undeclared state 2"),
    ("ROOT 0\nSTATE 0 : {}\nSUCC f : 0 -> 0\nSUCC f : 0 -> 0\n", "given twice"),
    ("ROOT 0\nNODE 0\n", "unknown keyword 'NODE'"),
])
def test_model_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_model(text)


@pytest.mark.parametrize("seed", range(30))
def test_model_round_trip(seed):
    m = random_model(random.Random(seed))
    back = parse_model(print_model(m))
    assert (back.states, back.valuation, back.succ, back.root) == (m.states, m.valuation, m.succ, m.root)


@pytest.mark.parametrize("seed", range(30))
def test_generated_clause_round_trip(seed):
    cs = random_clause_set(random.Random(seed))
    assert parse_clauses(print_clauses(cs)) == cs

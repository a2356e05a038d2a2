import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from treebnf.bnf import (
    ASometime, AStep, ClauseSet, ESometime, EStep, Initial, Literal, MalformedRaw, RawClause,
    clause_multiset, clause_set_to_formula, cnf, dnf, free_symbols, lit, lits, normalize,
    validate_clause_set,
)
from treebnf.formula import (
    AF, AG, AX, EF, EX, START, TOP, And, Atom, Implies, Not, Or, atoms, conj,
)
from treebnf.generate import random_model
from treebnf.modelcheck import IndexedModel, holds

p, q, r, v, y, u = (Atom(n) for n in "pqrvyu")


def same(cs, expected):
    return clause_multiset(set(cs)) == clause_multiset(set(expected))


# ------------------------------------------------------------------ validation

@pytest.mark.parametrize("clause", [
    Initial(lits("q0", "q1")),
    EStep(lits("p"), lits("q"), "ind1"),
    AStep((), lits("~l", "q1")),
    ASometime(lits("p", "~r"), lit("q")),
    ESometime((), lit("~q"), "f"),
])
def test_valid_shapes(clause):
    assert validate_clause_set(ClauseSet((clause,))).ok


def test_sometime_goal_must_be_literal():
    bad = ASometime(lits("p"), (lit("q"), lit("r")))
    report = validate_clause_set(ClauseSet((bad,)))
    assert report.errors == ["clause 0: sometime goal not a literal"]


def test_other_violations_are_reported():
    cs = ClauseSet((AStep(lits("p"), [lit("q")]), EStep((), lits("q"), ""), "junk"))
    errors = validate_clause_set(cs).errors
    assert errors == [
        "clause 0: rhs must be a tuple of literals",
        "clause 1: index must be a nonempty name",
        "clause 2: not one of the five clause shapes",
    ]


# ---------------------------------------------------------------- free_symbols

def test_free_symbols_empty():
    assert free_symbols(ClauseSet()) == (set(), set())


def test_free_symbols_indexed_steps():
    cs = ClauseSet((
        EStep(lits("q1"), lits("q1"), "ind1"),
        EStep(lits("q1"), lits("q2"), "ind2"),
        EStep(lits("q2"), lits("q1"), "ind1"),
    ))
    assert free_symbols(cs) == ({"q1", "q2"}, {"ind1", "ind2"})


def test_free_symbols_a_clause_has_no_index():
    assert free_symbols(ClauseSet((ASometime(lits("p"), lit("q")),))) == ({"p", "q"}, set())


# ------------------------------------------------------- clause_set_to_formula

def test_formula_without_global_clauses():
    assert clause_set_to_formula(ClauseSet((Initial(lits("q1")),))) == And((Atom("q1"), AG(TOP)))


def test_formula_assembly():
    cs = ClauseSet((Initial(lits("q1")), AStep(lits("p"), lits("q"))))
    assert clause_set_to_formula(cs) == And((Atom("q1"), AG(Implies(p, AX(q)))))


def test_formula_with_no_initial_part():
    cs = ClauseSet((AStep((), lits("q")),))
    assert clause_set_to_formula(cs) == And((TOP, AG(AX(q))))


# ------------------------------------------------------------------- normalize

def test_distribute_initial_conjunction():
    cs = normalize([RawClause(START, Or((Not(Atom("q1")), And((p, r)))))])
    assert same(cs, [Initial(lits("~q1", "p")), Initial(lits("~q1", "r"))])


def test_global_classical_clause():
    cs = normalize([RawClause(v, And((p, r)))])
    assert same(cs, [
        Initial(lits("~v", "p")), Initial(lits("~v", "r")),
        AStep((), lits("~v", "p")), AStep((), lits("~v", "r")),
    ])


def test_always_loop():
    cs = normalize([RawClause(y, AG(u))])
    assert same(cs, [
        Initial(lits("~y", "_g1")), Initial(lits("~y", "u")),
        AStep((), lits("~y", "_g1")), AStep((), lits("~y", "u")),
        AStep(lits("_g1"), lits("u")), AStep(lits("_g1"), lits("_g1")),
    ])
    assert len(cs) == 6


def test_fresh_names_avoid_taken():
    cs = normalize([RawClause(Atom("_g1"), AG(u))])
    assert "_g2" in free_symbols(cs)[0]
    cs = normalize([RawClause(y, AG(u))], taken={"_g1"})
    assert "_g2" in free_symbols(cs)[0] and "_g1" not in free_symbols(cs)[0]


def test_fresh_names_are_deterministic():
    raw = [RawClause(y, AG(u)), RawClause(p, AF(And((q, r))))]
    assert normalize(raw) == normalize(raw)


def test_step_with_disjunctive_lhs_splits():
    cs = normalize([RawClause(Or((p, q)), EX(And((r, u)), "f"))])
    assert same(cs, [
        EStep(lits("p"), lits("r"), "f"), EStep(lits("p"), lits("u"), "f"),
        EStep(lits("q"), lits("r"), "f"), EStep(lits("q"), lits("u"), "f"),
    ])


def test_compound_goal_gets_fresh_name():
    cs = normalize([RawClause(p, AF(And((q, r))))])
    assert ASometime(lits("p"), lit("_g1")) in cs.clauses
    assert validate_clause_set(cs).ok


def test_start_with_temporal_rhs():
    cs = normalize([RawClause(START, AX(p))])
    assert same(cs, [Initial(lits("_g1")), AStep(lits("_g1"), lits("p"))])


def test_strict_clauses_pass_through():
    cs = ClauseSet((Initial(lits("p")), ESometime(lits("q"), lit("r"), "f")))
    assert normalize(cs) == cs


@pytest.mark.parametrize("rhs", [AX(AX(p)), AF(EX(p, "f")), Not(AX(p)), AG(AF(p))])
def test_deep_nesting_is_rejected(rhs):
    with pytest.raises(MalformedRaw):
        normalize([RawClause(q, rhs)])


def test_temporal_lhs_is_rejected():
    with pytest.raises(MalformedRaw):
        normalize([RawClause(AX(p), q)])


def test_cnf_and_dnf():
    assert cnf(TOP) == []
    assert cnf(Or((p, Not(p)))) == []
    assert cnf(And((p, Not(p)))) == [lits("p"), lits("~p")]
    assert dnf(Or((p, And((q, r))))) in ([lits("p"), lits("q", "r")], [lits("q", "r"), lits("p")])


# ------------------------------------------------------------------ properties

classical = st.recursive(
    st.sampled_from([p, q, r, Not(p), Not(q)]),
    lambda kids: st.one_of(
        st.tuples(kids, kids).map(And),
        st.tuples(kids, kids).map(Or),
        st.builds(Implies, kids, kids),
        kids.map(Not),
    ),
    max_leaves=5,
)


def _wrap(draw_kind, arg):
    match draw_kind:
        case "cl":
            return arg
        case "AX":
            return AX(arg)
        case "EX":
            return EX(arg, "f")
        case "AF":
            return AF(arg)
        case "EF":
            return EF(arg, "g")
        case _:
            return AG(arg)


raw_clause = st.builds(
    lambda lhs, kind, arg: RawClause(lhs, _wrap(kind, arg)),
    st.one_of(st.just(START), classical),
    st.sampled_from(["cl", "AX", "EX", "AF", "EF", "AG"]),
    classical,
)


@settings(max_examples=150, deadline=None)
@given(st.lists(raw_clause, min_size=1, max_size=4))
def test_normalize_output_validates_and_is_idempotent(raw):
    cs = normalize(raw)
    assert validate_clause_set(cs).ok
    assert normalize(cs) == cs
    assert normalize(list(cs)) == cs


def raw_formula(raw) -> object:
    init, glob = [], []
    for c in raw:
        if c.lhs == START:
            init.append(c.rhs)
        else:
            glob.append(Implies(c.lhs, c.rhs))
    return And((conj(init), AG(conj(glob))))


def extensions(m: IndexedModel, fresh: list[str]):
    """Every way of adding the ``fresh`` propositions to the valuation of ``m``."""
    slots = [(s, x) for s in m.states for x in fresh]
    for bits in itertools.product((False, True), repeat=len(slots)):
        val = {s: set(m.valuation[s]) for s in m.states}
        for (s, x), b in zip(slots, bits):
            if b:
                val[s].add(x)
        yield IndexedModel(m.states, {s: frozenset(a) for s, a in val.items()}, m.succ, m.root)


@settings(max_examples=120, deadline=None)
@given(st.lists(raw_clause, min_size=1, max_size=3), st.integers(0, 2**32))
def test_normalize_is_equisatisfiable_on_small_models(raw, seed):
    cs = normalize(raw)
    original = set().union(*(atoms(c.lhs) | atoms(c.rhs) for c in raw))
    fresh = sorted(free_symbols(cs)[0] - original)
    if len(fresh) > 2:
        return
    m = random_model(random.Random(seed), max_states=3, props=("p", "q", "r"))
    direct = holds(m, m.root, raw_formula(raw))
    via_normal = any(holds(e, e.root, clause_set_to_formula(cs)) for e in extensions(m, fresh))
    assert direct == via_normal


@pytest.mark.parametrize("seed", range(40))
def test_global_classical_rule_is_equivalent(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_states=3, props=("p", "q", "r", "v"))
    cs = normalize([RawClause(v, And((p, Or((q, Not(r))))))])
    direct = holds(m, m.root, AG(Implies(v, And((p, Or((q, Not(r))))))))
    assert holds(m, m.root, clause_set_to_formula(cs)) == direct


def test_literal_helpers():
    assert lit("~p") == Literal("p", True)
    assert lit("~p").complement() == lit("p")
    assert lit("p").complement().complement() == lit("p")
    assert str(lit("~x")) == "~x"
    assert lit("p").holds_in({"p"}) and lit("~p").holds_in(set())

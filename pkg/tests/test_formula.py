from treebnf.formula import (
    AF, AG, AX, BOT, EF, EX, TOP, And, Atom, Implies, Not, Or, atoms, conj, disj, indices,
    is_literal, negate, show, size, sort_key, temporal_depth,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_conj_flattens_and_drops_units():
    assert conj([p, TOP, And((q, r))]) == And((p, q, r))
    assert conj([p, BOT]) == BOT
    assert conj([]) == TOP
    assert conj([p, p]) == p


def test_disj_flattens_and_drops_units():
    assert disj([p, BOT, Or((q, r))]) == Or((p, q, r))
    assert disj([p, TOP]) == TOP
    assert disj([]) == BOT


def test_negate_pushes_through_classical_only():
    assert negate(And((p, Not(q)))) == Or((Not(p), q))
    assert negate(Implies(p, q)) == And((p, Not(q)))
    assert negate(AX(p)) == Not(AX(p))
    assert negate(Not(p)) == p


def test_sort_key_orders_by_size_first():
    assert sort_key(p) < sort_key(And((p, q)))
    assert sort_key(p) < sort_key(q)
    assert sorted([AX(p), q, p]) == [p, q, AX(p)]


def test_symbols_and_depth():
    f = Implies(p, EF(And((q, EX(r, "f"))), "g"))
    assert atoms(f) == {"p", "q", "r"}
    assert indices(f) == {"f", "g"}
    assert temporal_depth(f) == 2
    assert size(AG(p)) == 2


def test_literals():
    assert is_literal(p) and is_literal(Not(p))
    assert not is_literal(Not(Not(p)))


def test_show_uses_ascii_operators():
    assert show(Implies(And((p, q)), AX(Or((r, Not(p)))))) == "(p & q) => A X (r | ~p)"
    assert show(EF(p, "ind1")) == "E F <ind1> p"
    assert show(AF(BOT)) == "A F F_"

"""Seeded random generators for automata, clause sets, models and formulas."""

from __future__ import annotations

import itertools
import random

from .automata import BuchiTreeAutomaton, Transition
from .bnf import ASometime, AStep, ClauseSet, ESometime, EStep, Initial, Literal
from .formula import AF, AG, AX, EF, EX, And, Atom, Formula, Implies, Not, Or
from .modelcheck import IndexedModel


def _subset(rng: random.Random, items, k_min=0, k_max=None):
    items = list(items)
    k_max = len(items) if k_max is None else min(k_max, len(items))
    k = rng.randint(k_min, k_max)
    return sorted(rng.sample(items, k), key=items.index)


def random_automaton(rng: random.Random, max_states: int = 3, max_letters: int = 2,
                     props=("p", "r"), degrees=(1, 2), max_tuples: int = 2,
                     label_consistent: bool = True) -> BuchiTreeAutomaton:
    """A random automaton with at least one initial state.

    With ``label_consistent`` every state is given a letter and moves reading
    a letter only lead to states carrying that letter, so the labelling
    derived from the transitions never conflicts.
    """
    n = rng.randint(1, max_states)
    states = tuple(f"s{i}" for i in range(n))
    letters = [frozenset(c) for k in range(len(props) + 1)
               for c in itertools.combinations(props, k)]
    alphabet = tuple(_subset(rng, letters, 1, max_letters))
    ds = tuple(_subset(rng, degrees, 1))
    own = {s: rng.choice(alphabet) for s in states}
    transitions = []
    for s in states:
        for sym in alphabet:
            pool = [c for c in states if own[c] == sym] if label_consistent else list(states)
            if not pool:
                continue
            for d in ds:
                for _ in range(rng.randint(0, max_tuples)):
                    t = Transition(s, sym, d, tuple(rng.choice(pool) for _ in range(d)))
                    if t not in transitions:
                        transitions.append(t)
    return BuchiTreeAutomaton(
        alphabet=alphabet,
        degrees=ds,
        states=states,
        transitions=tuple(transitions),
        initial=tuple(_subset(rng, states, 1)),
        accepting=tuple(_subset(rng, states)),
    )


def _random_lit(rng: random.Random, props) -> Literal:
    return Literal(rng.choice(props), rng.random() < 0.5)


def _random_conj(rng, props, k_max) -> tuple[Literal, ...]:
    out = []
    for _ in range(rng.randint(0, k_max)):
        x = _random_lit(rng, props)
        if x not in out and x.complement() not in out:
            out.append(x)
    return tuple(out)


def _random_disj(rng, props, k_max) -> tuple[Literal, ...]:
    out = []
    for _ in range(rng.randint(1, k_max)):
        x = _random_lit(rng, props)
        if x not in out:
            out.append(x)
    return tuple(out)


def random_clause(rng: random.Random, props, inds):
    kinds = ["I", "A", "AF"] + (["E", "EF"] if inds else [])
    kind = rng.choice(kinds)
    lhs = _random_conj(rng, props, 2)
    match kind:
        case "I":
            return Initial(_random_disj(rng, props, 2))
        case "A":
            return AStep(lhs, _random_disj(rng, props, 2))
        case "E":
            return EStep(lhs, _random_disj(rng, props, 2), rng.choice(inds))
        case "AF":
            return ASometime(lhs, _random_lit(rng, props))
        case _:
            return ESometime(lhs, _random_lit(rng, props), rng.choice(inds))


def random_clause_set(rng: random.Random, max_props: int = 6, max_inds: int = 2,
                      max_clauses: int = 8) -> ClauseSet:
    props = [f"p{i}" for i in range(rng.randint(1, max_props))]
    inds = [f"f{i}" for i in range(rng.randint(0, max_inds))]
    k = rng.randint(1, max_clauses)
    return ClauseSet(tuple(random_clause(rng, props, inds) for _ in range(k)))


def random_unsat_clause_set(rng: random.Random, max_props: int = 4, max_inds: int = 2,
                            noise: int = 3) -> ClauseSet:
    """A clause set unsatisfiable by construction, padded with random clauses.

    The core is one of: a contradiction at the root, an eventuality that an
    invariant forbids, or an indexed step contradicting a universal one.
    """
    props = [f"p{i}" for i in range(max(2, rng.randint(2, max_props)))]
    inds = [f"f{i}" for i in range(rng.randint(1, max_inds))]
    a, g = Literal(props[0]), _random_lit(rng, props[1:])
    family = rng.randrange(4)
    if family == 0:
        core = [Initial((a,)), Initial((a.complement(),))]
    elif family == 1:
        core = [Initial((a,)), ASometime((a,), g), Initial((g.complement(),)),
                AStep((), (g.complement(),))]
    elif family == 2:
        core = [Initial((a,)), ESometime((a,), g, rng.choice(inds)),
                Initial((g.complement(),)), AStep((), (g.complement(),))]
    else:
        ind = rng.choice(inds)
        core = [Initial((a,)), AStep((a,), (g,)), EStep((a,), (g.complement(),), ind)]
    extra = [random_clause(rng, props, inds) for _ in range(rng.randint(0, noise))]
    clauses = core + extra
    rng.shuffle(clauses)
    return ClauseSet(tuple(clauses))


def random_model(rng: random.Random, max_states: int = 4, props=("p", "q"),
                 inds=("f", "g")) -> IndexedModel:
    n = rng.randint(1, max_states)
    states = tuple(range(n))
    succ = {ind: {s: rng.randrange(n) for s in states} for ind in inds}
    # hang each state off a distinct earlier (state, index) slot so all are reachable
    free = [(0, ind) for ind in inds]
    for s in states[1:]:
        parent, ind = free.pop(rng.randrange(len(free)))
        succ[ind][parent] = s
        free += [(s, i) for i in inds]
    return IndexedModel(
        states=states,
        valuation={s: frozenset(p for p in props if rng.random() < 0.5) for s in states},
        succ=succ,
        root=0,
    )


def random_formula(rng: random.Random, depth: int = 3, props=("p", "q"),
                   inds=("f", "g")) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        f = Atom(rng.choice(props))
        return Not(f) if rng.random() < 0.3 else f
    sub = lambda: random_formula(rng, depth - 1, props, inds)  # noqa: E731
    match rng.randrange(9):
        case 0:
            return Not(sub())
        case 1:
            return And((sub(), sub()))
        case 2:
            return Or((sub(), sub()))
        case 3:
            return Implies(sub(), sub())
        case 4:
            return AX(sub())
        case 5:
            return EX(sub(), rng.choice(inds))
        case 6:
            return AG(sub())
        case 7:
            return AF(sub())
        case _:
            return EF(sub(), rng.choice(inds))



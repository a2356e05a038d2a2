"""Characteristic clause set of a Büchi tree automaton.

The encoding has four parts: the initial states, the transition function
(one ``E X`` clause per successor, indexed by direction), the labelling of
states, and the Büchi acceptance condition expressed with the auxiliary
propositions ``_y``, ``_u``, ``_l``, ``_w`` plus a loop proposition that
normalisation introduces for ``_y => A G _u``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .automata import BuchiTreeAutomaton
from .bnf import ClauseSet, EStep, Literal, RawClause, normalize
from .formula import AG, AX, EF, EX, START, TOP, Atom, Not, conj, disj

POSITIONAL = "positional"
SUCCESSOR = "successor"
MODES = (POSITIONAL, SUCCESSOR)


class EmptyInitial(ValueError):
    pass


class LabelConflict(ValueError):
    pass


class DegreeOverflow(ValueError):
    pass


class EmptyAcceptingWarning(UserWarning):
    pass


@dataclass(frozen=True)
class StateEncoding:
    state_prop: dict[str, str]
    indices: tuple[str, ...]
    label_aux: dict[str, str]
    y: str = "_y"
    u: str = "_u"
    l: str = "_l"
    w: str = "_w"

    def q(self, state: str) -> Atom:
        return Atom(self.state_prop[state])

    def index_of_position(self, k: int) -> str:
        """Index name for the 1-based position or successor number ``k``."""
        if not 1 <= k <= len(self.indices):
            raise DegreeOverflow(f"position {k} exceeds the {len(self.indices)} available indices")
        return self.indices[k - 1]

    @property
    def names(self) -> set[str]:
        return {*self.state_prop.values(), *self.label_aux.values(),
                self.y, self.u, self.l, self.w}


def distinct_successors(a: BuchiTreeAutomaton, state: str) -> list[str]:
    out: list[str] = []
    for t in a.moves(state):
        for c in t.children:
            if c not in out:
                out.append(c)
    return out


def state_labels(a: BuchiTreeAutomaton) -> dict[str, frozenset[str]]:
    """Valuation of each state over the alphabet's propositions.

    A child of a move reading letter ``sigma`` is labelled by ``sigma``;
    states entered by no move get the empty valuation.  Explicit
    ``a.labels`` take precedence.
    """
    if a.labels is not None:
        return {s: frozenset(a.labels.get(s, frozenset())) for s in a.states}
    seen: dict[str, frozenset[str]] = {}
    for t in a.transitions:
        for c in t.children:
            prev = seen.setdefault(c, t.symbol)
            if prev != t.symbol:
                raise LabelConflict(
                    f"state {c!r} is entered under both {sorted(prev)} and {sorted(t.symbol)}")
    return {s: seen.get(s, frozenset()) for s in a.states}


def make_encoding(a: BuchiTreeAutomaton, mode: str = SUCCESSOR) -> StateEncoding:
    if mode not in MODES:
        raise ValueError(f"unknown transition mode {mode!r}")
    if mode == POSITIONAL:
        width = max([*a.degrees, *(t.degree for t in a.transitions)], default=1)
    else:
        width = max((len(distinct_successors(a, s)) for s in a.states), default=1)
    width = max(width, 1)
    labels = state_labels(a)
    aux: dict[frozenset, str] = {}
    for s in a.states:
        aux.setdefault(labels[s], f"_v{len(aux) + 1}")
    return StateEncoding(
        state_prop={s: f"_q{i + 1}" for i, s in enumerate(a.states)},
        indices=tuple(f"ind{k}" for k in range(1, width + 1)),
        label_aux={s: aux[labels[s]] for s in a.states},
    )


def encode_initial(a: BuchiTreeAutomaton, enc: StateEncoding) -> list[RawClause]:
    if not a.initial:
        raise EmptyInitial("automaton has no initial state; its language is empty")
    qs = [enc.q(s) for s in a.initial]
    out = [RawClause(START, disj(qs))]
    for i, qi in enumerate(qs[:-1]):
        others = conj([Not(qj) for qj in qs[i + 1:]])
        out.append(RawClause(START, disj([Not(qi), others])))
    return out


def encode_transitions(a: BuchiTreeAutomaton, enc: StateEncoding,
                       mode: str = SUCCESSOR) -> list[EStep]:
    out: list[EStep] = []
    for s in a.states:
        q = (Literal(enc.state_prop[s]),)
        if mode == POSITIONAL:
            pairs = [(k, c) for t in a.moves(s) for k, c in enumerate(t.children, 1)]
        elif mode == SUCCESSOR:
            pairs = list(enumerate(distinct_successors(a, s), 1))
        else:
            raise ValueError(f"unknown transition mode {mode!r}")
        for k, c in pairs:
            clause = EStep(q, (Literal(enc.state_prop[c]),), enc.index_of_position(k))
            if clause not in out:
                out.append(clause)
    return out


def _valuation(props, true_props):
    return conj([Atom(p) if p in true_props else Not(Atom(p)) for p in props])


def encode_labelling(a: BuchiTreeAutomaton, enc: StateEncoding) -> list[RawClause]:
    labels = state_labels(a)
    props = a.props
    out: list[RawClause] = []
    defined: set[str] = set()
    for s in a.states:
        q, v = enc.q(s), Atom(enc.label_aux[s])
        val = _valuation(props, labels[s])
        out.append(RawClause(START, disj([Not(q), val])))
        out.append(RawClause(TOP, AX(disj([Not(q), v]))))
        if v.name not in defined:
            defined.add(v.name)
            out.append(RawClause(v, val))
    return out


def encode_acceptance(a: BuchiTreeAutomaton, enc: StateEncoding) -> list[RawClause]:
    if not a.accepting:
        warnings.warn("no accepting states: the clause set forces ~_l everywhere",
                      EmptyAcceptingWarning, stacklevel=2)
    y, u, l, w = (Atom(n) for n in (enc.y, enc.u, enc.l, enc.w))
    hit = disj([Not(l), *(enc.q(s) for s in a.accepting)])
    out = [RawClause(START, y), RawClause(y, AG(u))]
    for ind in enc.indices:
        out += [RawClause(u, EF(l, ind)), RawClause(l, EX(w, ind)), RawClause(w, EF(l, ind))]
    out += [RawClause(START, hit), RawClause(TOP, AX(hit))]
    return out


def characteristic_clause_set(a: BuchiTreeAutomaton, mode: str = SUCCESSOR,
                              enc: StateEncoding | None = None) -> ClauseSet:
    enc = enc or make_encoding(a, mode)
    raw = [*encode_initial(a, enc), *encode_transitions(a, enc, mode),
           *encode_labelling(a, enc), *encode_acceptance(a, enc)]
    return normalize(raw, taken=set(a.props) | enc.names)

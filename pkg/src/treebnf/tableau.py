"""Tableau decision procedure for BNF clause sets.

Pipeline: ``augment`` adds tracker propositions for eventualities, the root
pre-label ``In & A G phi`` is expanded with alpha/beta rules into states,
states get one batch of successors per index, and ``reduce`` deletes states
until every survivor has a live successor for each index and every
eventuality it carries is pseudo-fulfilled.  A non-empty reduced tableau
yields both an indexed model and a Büchi tree automaton.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .automata import BuchiTreeAutomaton, Transition
from .bnf import (
    ASometime, AStep, ClauseSet, ESometime, EStep, Initial, Literal, clause_set_to_formula,
    free_symbols, fresh_names, normalize,
)
from .formula import (
    AF, AG, AX, EF, EX, And, Atom, Bot, Formula, Implies, Not, Or, Top, sort_key,
)
from .modelcheck import DEFAULT_INDEX, IndexedModel


class EmptyTableau(ValueError):
    pass


class NoUnmarked(LookupError):
    pass


class ClosureOverflow(RuntimeError):
    pass


# ------------------------------------------------------------- augmentation

@dataclass(frozen=True)
class Eventuality:
    path_quantifier: str  # "A" or "E"
    goal: Literal
    ind: str | None
    tracker: str

    def formula(self) -> Formula:
        if self.path_quantifier == "A":
            return AF(self.goal.to_formula())
        return EF(self.goal.to_formula(), self.ind)


def eventualities(cs: ClauseSet) -> list[Eventuality]:
    """Distinct eventualities of ``cs``, ``E`` ones first, each with a fresh tracker."""
    props, _ = free_symbols(cs)
    seen: list[tuple] = []
    for c in cs.sometime:
        key = ("E", c.goal, c.ind) if isinstance(c, ESometime) else ("A", c.goal, None)
        if key not in seen:
            seen.append(key)
    seen.sort(key=lambda k: k[0] != "E")
    names = fresh_names("_w", set(props) | {"_w"})
    return [Eventuality(p, g, i, next(names)) for p, g, i in seen]


def augment(cs: ClauseSet) -> ClauseSet:
    """Add tracker clauses for every sometime clause ``C => P F l``."""
    evs = eventualities(cs)
    tracker = {(e.path_quantifier, e.goal, e.ind): e.tracker for e in evs}
    extra: list = []
    for c in cs.sometime:
        if isinstance(c, ESometime):
            w = Literal(tracker["E", c.goal, c.ind])
        else:
            w = Literal(tracker["A", c.goal, None])
        escape = tuple(x.complement() for x in c.lhs) + (c.goal, w)
        new = [Initial(escape)]
        if isinstance(c, ASometime):
            new += [AStep((w,), (c.goal, w)), AStep((), escape)]
        else:
            new += [EStep((w,), (c.goal, w), c.ind), EStep((), escape, c.ind)]
        for n in new:
            if n not in extra and n not in cs.clauses:
                extra.append(n)
    return cs + extra


# ------------------------------------------------------------------ closure

def gfl_closure(f: Formula) -> set[Formula]:
    """Least set containing ``f``, closed under subformulas, the one-step
    unfoldings of ``A G``, ``A F`` and ``E F``, and single negation."""
    out: set[Formula] = set()
    todo = [f]
    while todo:
        g = todo.pop()
        if g in out:
            continue
        out.add(g)
        match g:
            case And(args) | Or(args):
                todo.extend(args)
            case Implies(lhs, rhs):
                todo += [lhs, rhs]
            case Not(a) | AX(a) | EX(a, _):
                todo.append(a)
            case AG(a):
                todo += [a, AX(g)]
            case AF(a):
                todo += [a, AX(g)]
            case EF(a, ind):
                todo += [a, EX(g, ind)]
        if not isinstance(g, Not):
            todo.append(Not(g))
    return out


# ---------------------------------------------------------------- expansion

_LIT, _TOP, _BOT, _ALPHA, _BETA, _NEXT_A, _NEXT_E = range(7)


def _neg(f: Formula) -> Formula:
    """Negation that strips an outer ``~`` instead of stacking a second one."""
    return f.arg if isinstance(f, Not) else Not(f)


def _classify(f: Formula):
    """Kind of a label formula and its expansion components."""
    match f:
        case Atom() | Not(Atom()):
            return _LIT, ()
        case Top() | Not(Bot()):
            return _TOP, ()
        case Bot() | Not(Top()):
            return _BOT, ()
        case And(args):
            return _ALPHA, args
        case AG(a):
            return _ALPHA, (a, AX(f))
        case Not(Or(args)):
            return _ALPHA, tuple(_neg(a) for a in args)
        case Not(Not(a)):
            return _ALPHA, (a,)
        case Not(Implies(lhs, rhs)):
            return _ALPHA, (lhs, _neg(rhs))
        case Implies(lhs, rhs):
            return _BETA, (_neg(lhs), rhs)
        case Or(args):
            return _BETA, args
        case Not(And(args)):
            return _BETA, tuple(_neg(a) for a in args)
        case AF(a):
            return _BETA, (a, AX(f))
        case EF(a, ind):
            return _BETA, (a, EX(f, ind))
        case AX(_):
            return _NEXT_A, ()
        case EX(_, _):
            return _NEXT_E, ()
    raise ValueError(f"formula outside the tableau fragment: {f}")


class _Universe:
    """Interns formulas as integers and caches their classification."""

    def __init__(self, closure: set[Formula] | None = None):
        self.closure = closure
        self.formula: list[Formula] = []
        self.id: dict[Formula, int] = {}
        self.kind: list[int] = []
        self.parts: list[tuple[int, ...]] = []
        self.key: list[tuple] = []

    def __call__(self, f: Formula) -> int:
        i = self.id.get(f)
        if i is not None:
            return i
        if self.closure is not None and f not in self.closure:
            raise ClosureOverflow(f"{f} escaped the closure")
        i = len(self.formula)
        self.id[f] = i
        self.formula.append(f)
        kind, comps = _classify(f)
        self.kind.append(kind)
        self.parts.append(())
        self.key.append(sort_key(f))
        self.parts[i] = tuple(self(c) for c in comps)
        return i

    def complement(self, i: int) -> int | None:
        f = self.formula[i]
        return self.id.get(f.arg if isinstance(f, Not) else Not(f))

    def describe(self, i: int) -> tuple[int, tuple[int, ...]]:
        return self.kind[i], self.parts[i]


def _consistent_with(u: _Universe, label: set[int], i: int) -> bool:
    if u.kind[i] == _BOT:
        return False
    c = u.complement(i)
    return c is None or c not in label


def _entailed(u: _Universe, label, i: int) -> bool:
    """Cheap syntactic entailment used to skip a beta branch."""
    if i in label or u.kind[i] == _TOP:
        return True
    if u.kind[i] == _BETA and isinstance(u.formula[i], (Or, Implies, Not)):
        return any(_entailed(u, label, p) for p in u.parts[i])
    if u.kind[i] == _ALPHA and isinstance(u.formula[i], (And, Not)):
        return all(_entailed(u, label, p) for p in u.parts[i])
    return False


def _expand_all(u: _Universe, pre: frozenset[int], minimal: bool = True) -> list[frozenset[int]]:
    """All fully expanded, propositionally consistent labels grown from ``pre``.

    With ``minimal`` a label is dropped when another expansion of the same
    pre-label is a proper subset of it: the larger one only adds obligations.
    """
    start = set()
    for i in sorted(pre, key=u.key.__getitem__):
        if not _consistent_with(u, start, i):
            return []
        start.add(i)
    results: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    stack = [(start, frozenset())]
    while stack:
        label, marked = stack.pop()
        todo = [i for i in label if i not in marked and u.kind[i] in (_ALPHA, _BETA)]
        if not todo:
            fl = frozenset(label)
            if fl not in seen:
                seen.add(fl)
                results.append(fl)
            continue
        b = min(todo, key=u.key.__getitem__)
        marked = marked | {b}
        parts = u.parts[b]
        if u.kind[b] == _ALPHA:
            new = set(label)
            if all(_consistent_with(u, new, p) and not new.add(p) for p in parts):
                stack.append((new, marked))
            continue
        if any(_entailed(u, label, p) for p in parts):
            stack.append((label, marked))
            continue
        # push in reverse so the first disjunct is explored first
        for p in reversed(parts):
            if _consistent_with(u, label, p):
                stack.append((label | {p}, marked))
    if not minimal:
        return results
    by_size = sorted(results, key=len)
    kept: list[frozenset[int]] = []
    for lab in by_size:
        if not any(k < lab for k in kept):
            kept.append(lab)
    return [lab for lab in results if lab in kept]


def expand(label: frozenset[Formula]) -> list[frozenset[Formula]]:
    """Fully expand one label into its consistent states."""
    u = _Universe()
    pre = frozenset(u(f) for f in label)
    return [frozenset(u.formula[i] for i in s) for s in _expand_all(u, pre)]


# ------------------------------------------------------------------ tableau

@dataclass
class Tableau:
    """States, their labels and index-annotated successor candidates.

    ``succ[s][ind]`` lists every expansion of the ``ind`` successor
    pre-label of ``s``; any live one of them may serve as the successor.
    """
    indices: tuple[str, ...]
    labels: dict[int, frozenset[Formula]]
    succ: dict[int, dict[str, tuple[int, ...]]]
    roots: tuple[int, ...]
    eventualities: tuple[Formula, ...]
    cs: ClauseSet = field(default_factory=ClauseSet)

    @property
    def states(self) -> list[int]:
        return sorted(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def edges(self) -> list[tuple[int, str, int]]:
        return [(s, ind, t) for s in self.states for ind in self.indices
                for t in self.succ[s][ind]]

    def restrict(self, keep) -> Tableau:
        keep = set(keep)
        return Tableau(
            indices=self.indices,
            labels={s: l for s, l in self.labels.items() if s in keep},
            succ={s: {ind: tuple(t for t in ts if t in keep) for ind, ts in d.items()}
                  for s, d in self.succ.items() if s in keep},
            roots=tuple(r for r in self.roots if r in keep),
            eventualities=self.eventualities,
            cs=self.cs,
        )


def tableau_indices(cs: ClauseSet) -> tuple[str, ...]:
    _, inds = free_symbols(cs)
    return tuple(sorted(inds)) or (DEFAULT_INDEX,)


def build_tableau(cs_aug: ClauseSet, max_states: int | None = None,
                  minimal: bool = True) -> Tableau:
    root_formula = clause_set_to_formula(cs_aug)
    closure = gfl_closure(root_formula)
    u = _Universe(closure)
    indices = tableau_indices(cs_aug)
    limit = max_states if max_states is not None else 2 ** min(len(closure), 62)
    memo: dict[frozenset[int], tuple[int, ...]] = {}
    state_id: dict[frozenset[int], int] = {}
    order: list[frozenset[int]] = []

    def states_of(pre: frozenset[int]) -> tuple[int, ...]:
        hit = memo.get(pre)
        if hit is None:
            ids = []
            for lab in _expand_all(u, pre, minimal):
                if lab not in state_id:
                    state_id[lab] = len(order)
                    order.append(lab)
                    if len(order) > limit:
                        raise ClosureOverflow(f"more than {limit} tableau states")
                ids.append(state_id[lab])
            hit = memo[pre] = tuple(ids)
        return hit

    roots = states_of(frozenset([u(root_formula)]))
    succ: dict[int, dict[str, tuple[int, ...]]] = {}
    k = 0
    while k < len(order):
        label = order[k]
        common = {u(u.formula[i].arg) for i in label if u.kind[i] == _NEXT_A}
        by_ind: dict[str, set[int]] = {ind: set(common) for ind in indices}
        for i in label:
            if u.kind[i] == _NEXT_E:
                f = u.formula[i]
                by_ind[f.ind].add(u(f.arg))
        succ[k] = {ind: states_of(frozenset(by_ind[ind])) for ind in indices}
        k += 1
    evs = sorted({f for f in closure if isinstance(f, (AF, EF))}, key=sort_key)
    return Tableau(
        indices=indices,
        labels={i: frozenset(u.formula[j] for j in lab) for i, lab in enumerate(order)},
        succ=succ,
        roots=roots,
        eventualities=tuple(evs),
        cs=cs_aug,
    )


# ---------------------------------------------------------------- reduction

def _goal(ev: Formula) -> Formula:
    return ev.arg


def _fulfilment_ranks(t: Tableau, ev: Formula, alive: set[int]) -> dict[int, int]:
    """Least-fixpoint stage at which each live state fulfils ``ev``."""
    goal = _goal(ev)
    rank = {s: 0 for s in alive if goal in t.labels[s]}
    stage = 0
    while True:
        stage += 1
        layer = []
        for s in alive:
            if s in rank:
                continue
            if isinstance(ev, AF):
                ok = all(any(x in rank for x in t.succ[s][ind]) for ind in t.indices)
            else:
                ok = any(x in rank for x in t.succ[s][ev.ind])
            if ok:
                layer.append(s)
        if not layer:
            return rank
        for s in layer:
            rank[s] = stage


def is_pseudo_fulfilled(t: Tableau, s: int, ev: Formula, alive=None) -> bool:
    alive = set(t.labels) if alive is None else alive
    return s in _fulfilment_ranks(t, ev, alive)


def _doomed(t: Tableau, alive: set[int]) -> set[int]:
    out = {s for s in alive
           if any(not any(x in alive for x in t.succ[s][ind]) for ind in t.indices)}
    for ev in t.eventualities:
        carriers = [s for s in alive if ev in t.labels[s]]
        if not carriers:
            continue
        ok = _fulfilment_ranks(t, ev, alive)
        out.update(s for s in carriers if s not in ok)
    return out


def reduce(t: Tableau, rng: random.Random | None = None) -> Tableau:
    """Apply the deletion rules until nothing changes.

    By default every deletable state is removed in one sweep; with ``rng``
    a single randomly chosen deletable state goes per round, which must end
    in the same result.
    """
    alive = set(t.labels)
    while True:
        doomed = _doomed(t, alive)
        if not doomed:
            return t.restrict(alive)
        if rng is None:
            alive -= doomed
        else:
            alive.discard(rng.choice(sorted(doomed)))


def decide(cs: ClauseSet, max_states: int | None = None,
           minimal: bool = True) -> tuple[ClauseSet, Tableau, Tableau]:
    """``(augmented set, tableau, reduced tableau)`` for a clause set."""
    aug = augment(normalize(cs))
    t = build_tableau(aug, max_states, minimal)
    return aug, t, reduce(t)


def is_satisfiable(cs: ClauseSet) -> bool:
    _, _, rt = decide(cs)
    return bool(rt.roots)


# --------------------------------------------------------------- extraction

def _valuation(label: frozenset[Formula]) -> frozenset[str]:
    return frozenset(f.name for f in label if isinstance(f, Atom))


def extract_model(rt: Tableau) -> IndexedModel:
    """An indexed model unwinding the reduced tableau.

    Model states pair a tableau state with the position of the eventuality
    currently being pursued; a pending eventuality steers successor choice
    down its fulfilment ranks, otherwise the focus moves on.
    """
    if not rt.roots:
        raise EmptyTableau("reduced tableau has no initial state")
    alive = set(rt.labels)
    evs = rt.eventualities
    ranks = [_fulfilment_ranks(rt, ev, alive) for ev in evs]

    def pick(cands, r=None):
        if r is None:
            return cands[0]
        return min(cands, key=lambda x: (r.get(x, float("inf")), cands.index(x)))

    def step(node):
        s, k = node
        succ = rt.succ[s]
        if not evs:
            return {ind: (succ[ind][0], 0) for ind in rt.indices}
        ev = evs[k]
        label = rt.labels[s]
        pending = ev in label and _goal(ev) not in label
        if not pending:
            nk = (k + 1) % len(evs)
            return {ind: (succ[ind][0], nk) for ind in rt.indices}
        # branches that do not serve the pending eventuality move the focus on,
        # otherwise a path along another index could stay on it forever
        nk = (k + 1) % len(evs)
        out = {}
        for ind in rt.indices:
            if isinstance(ev, AF) or ind == ev.ind:
                out[ind] = (pick(succ[ind], ranks[k]), k)
            else:
                out[ind] = (pick(succ[ind]), nk)
        return out

    root = (rt.roots[0], 0)
    ids = {root: 0}
    order = [root]
    moves = {}
    for node in order:
        moves[node] = step(node)
        for nxt in moves[node].values():
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
    return IndexedModel(
        states=tuple(range(len(order))),
        valuation={ids[n]: _valuation(rt.labels[n[0]]) for n in order},
        succ={ind: {ids[n]: ids[moves[n][ind]] for n in order} for ind in rt.indices},
        root=0,
    )


def extract_automaton(rt: Tableau, cs_aug: ClauseSet | None = None) -> BuchiTreeAutomaton:
    """Büchi tree automaton whose states are the reduced tableau's states.

    Every state is accepting; the initial states are those whose valuation
    satisfies all initial clauses.
    """
    if not rt.labels:
        raise EmptyTableau("reduced tableau is empty")
    cs_aug = rt.cs if cs_aug is None else cs_aug
    names = {s: f"t{s}" for s in rt.states}
    vals = {s: _valuation(rt.labels[s]) for s in rt.states}
    degree = len(rt.indices)
    transitions = []
    for s in rt.states:
        for combo in itertools.product(*(rt.succ[s][ind] for ind in rt.indices)):
            transitions.append(Transition(names[s], vals[s], degree,
                                          tuple(names[c] for c in combo)))
    initial = [names[s] for s in rt.states
               if all(any(x.holds_in(vals[s]) for x in c.rhs) for c in cs_aug.initial)]
    alphabet = tuple(sorted(set(vals.values()), key=lambda v: (len(v), sorted(v))))
    states = tuple(names[s] for s in rt.states)
    return BuchiTreeAutomaton(
        alphabet=alphabet,
        degrees=(degree,),
        states=states,
        transitions=tuple(transitions),
        initial=tuple(initial),
        accepting=states,
    )


def dump_tableau(t: Tableau) -> str:
    """Plain-text adjacency listing, one block per state."""
    lines = []
    roots = set(t.roots)
    for s in t.states:
        tag = " (root)" if s in roots else ""
        lines.append(f"state {s}{tag}")
        body = sorted(t.labels[s], key=sort_key)
        lines.append("  label: " + ", ".join(str(f) for f in body))
        for ind in t.indices:
            lines.append(f"  {ind} -> " + " ".join(str(x) for x in t.succ[s][ind]))
        lines.append("")
    return "\n".join(lines)

"""Finite indexed models and the satisfaction relation for BNF formulas.

Every index denotes a total successor function; the transition relation of a
model is the union of those functions.  Fixpoint operators are evaluated
globally as state sets, so ``holds`` is a set-membership test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from .bnf import (
    ASometime, AStep, ClauseSet, ESometime, EStep, Initial, clause_set_to_formula,
    free_symbols,
)
from .formula import (
    AF, AG, AX, EF, EX, And, Atom, Bot, Formula, Implies, Not, Or, Start, Top,
)
from .report import ValidationReport

DEFAULT_INDEX = "_d"


class UnknownIndex(KeyError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, explored: int):
        super().__init__(f"{message} (explored {explored} candidate models)")
        self.explored = explored


@dataclass
class IndexedModel:
    states: tuple[Hashable, ...]
    valuation: dict[Hashable, frozenset[str]]
    succ: dict[str, dict[Hashable, Hashable]]
    root: Hashable
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def indices(self) -> list[str]:
        return sorted(self.succ)

    def successors(self, s) -> set:
        return {f[s] for f in self.succ.values()}

    def relation(self) -> set[tuple]:
        return {(s, f[s]) for f in self.succ.values() for s in self.states}

    def reachable(self, start=None) -> list:
        start = self.root if start is None else start
        seen, order = {start}, [start]
        for s in order:
            for ind in self.indices:
                t = self.succ[ind][s]
                if t not in seen:
                    seen.add(t)
                    order.append(t)
        return order


def validate_model(m: IndexedModel) -> ValidationReport:
    report = ValidationReport()
    states = set(m.states)
    if m.root not in states:
        report.errors.append("root is not a state")
    if not m.succ:
        report.errors.append("no index: the transition relation is not serial")
    for ind, f in m.succ.items():
        if set(f) != states:
            report.errors.append(f"successor function {ind!r} is not total")
        if not set(f.values()) <= states:
            report.errors.append(f"successor function {ind!r} leaves the state set")
    for s in m.states:
        if s not in m.valuation:
            report.errors.append(f"state {s!r} has no valuation")
    if not report.errors and len(m.reachable()) != len(states):
        report.errors.append("some state is unreachable from the root")
    return report


def sat(m: IndexedModel, f: Formula) -> frozenset:
    """The set of states of ``m`` satisfying ``f``."""
    hit = m._cache.get(f)
    if hit is not None:
        return hit
    states = m.states
    match f:
        case Top():
            out = frozenset(states)
        case Bot():
            out = frozenset()
        case Start():
            out = frozenset([m.root])
        case Atom(name):
            out = frozenset(s for s in states if name in m.valuation[s])
        case Not(a):
            out = frozenset(states) - sat(m, a)
        case And(args):
            out = frozenset(states)
            for a in args:
                out &= sat(m, a)
        case Or(args):
            out = frozenset()
            for a in args:
                out |= sat(m, a)
        case Implies(lhs, rhs):
            out = (frozenset(states) - sat(m, lhs)) | sat(m, rhs)
        case AX(a):
            out = _pre_all(m, sat(m, a))
        case EX(a, ind):
            out = _pre_ind(m, sat(m, a), ind)
        case AG(a):
            body = sat(m, a)
            z = body
            while True:
                nz = body & _pre_all(m, z)
                if nz == z:
                    break
                z = nz
            out = z
        case AF(a):
            body = sat(m, a)
            z = body
            while True:
                nz = body | _pre_all(m, z)
                if nz == z:
                    break
                z = nz
            out = z
        case EF(a, ind):
            body = sat(m, a)
            z = body
            while True:
                nz = body | _pre_ind(m, z, ind)
                if nz == z:
                    break
                z = nz
            out = z
        case _:
            raise TypeError(f"not a formula: {f!r}")
    m._cache[f] = out
    return out


def _pre_all(m: IndexedModel, target) -> frozenset:
    return frozenset(s for s in m.states
                     if all(fn[s] in target for fn in m.succ.values()))


def _pre_ind(m: IndexedModel, target, ind: str) -> frozenset:
    if ind not in m.succ:
        raise UnknownIndex(ind)
    fn = m.succ[ind]
    return frozenset(s for s in m.states if fn[s] in target)


def holds(m: IndexedModel, s, f: Formula) -> bool:
    return s in sat(m, f)


def check_clause_set(m: IndexedModel, cs: ClauseSet) -> bool:
    return holds(m, m.root, clause_set_to_formula(cs))


# ------------------------------------------------------- bounded model search

def _structures(n: int, k: int):
    """Successor-function tuples on ``n`` states, one per rooted isomorphism class.

    A structure is kept only if breadth-first search from state 0, taking
    indices in order, discovers the states as 0, 1, ..., n-1.
    """
    for flat in itertools.product(range(n), repeat=n * k):
        fns = [flat[i * n:(i + 1) * n] for i in range(k)]
        order, seen = [0], {0}
        for s in order:
            for fn in fns:
                t = fn[s]
                if t not in seen:
                    seen.add(t)
                    order.append(t)
        if order == list(range(n)):
            yield fns


class _Tables:
    """Clause semantics tabulated over valuation codes ``0 .. 2**len(props) - 1``."""

    def __init__(self, cs: ClauseSet, props: list[str], inds: list[str]):
        self.props = props
        codes = np.arange(1 << len(props), dtype=np.int64)
        bit = {p: ((codes >> i) & 1).astype(bool) for i, p in enumerate(props)}
        self.nvals = len(codes)

        def lit(x):
            return ~bit[x.prop] if x.negated else bit[x.prop]

        def conj_(ls):
            out = np.ones(self.nvals, dtype=bool)
            for x in ls:
                out &= lit(x)
            return out

        def disj_(ls):
            out = np.zeros(self.nvals, dtype=bool)
            for x in ls:
                out |= lit(x)
            return out

        self.initial = np.ones(self.nvals, dtype=bool)
        self.pair = {i: np.ones((self.nvals, self.nvals), dtype=bool) for i in inds}
        self.sometime = []
        for c in cs:
            match c:
                case Initial(rhs):
                    self.initial &= disj_(rhs)
                case AStep(lhs, rhs):
                    m = ~conj_(lhs)[:, None] | disj_(rhs)[None, :]
                    for i in inds:
                        self.pair[i] &= m
                case EStep(lhs, rhs, ind):
                    self.pair[ind] &= ~conj_(lhs)[:, None] | disj_(rhs)[None, :]
                case ASometime(lhs, goal):
                    self.sometime.append((conj_(lhs), lit(goal), None))
                case ESometime(lhs, goal, ind):
                    self.sometime.append((conj_(lhs), lit(goal), ind))


def _eventuality_table(fns: dict[str, tuple], n: int, ind: str | None) -> np.ndarray:
    """For each goal pattern (bitmask over states) the mask of states where
    ``A F goal`` (``ind is None``) or ``E F <ind> goal`` holds."""
    table = np.zeros(1 << n, dtype=np.int64)
    for pattern in range(1 << n):
        z = pattern
        while True:
            nz = z
            for s in range(n):
                if ind is None:
                    ok = all((z >> fn[s]) & 1 for fn in fns.values())
                else:
                    ok = (z >> fns[ind][s]) & 1
                if ok:
                    nz |= 1 << s
            if nz == z:
                break
            z = nz
        table[pattern] = z
    return table


def enumerate_models(cs: ClauseSet, max_states: int = 3,
                     budget: int | None = None) -> IndexedModel | None:
    """Exhaustive search for a model of ``cs`` with at most ``max_states`` states.

    Structures are enumerated up to rooted isomorphism; for each structure the
    per-state valuation domains are first pruned by arc consistency on the
    step clauses, then the remaining product is checked in bulk.  ``budget``
    caps the number of candidate (structure, valuation) pairs examined.
    """
    props_set, inds_set = free_symbols(cs)
    props = sorted(props_set)
    inds = sorted(inds_set) or [DEFAULT_INDEX]
    if len(props) > 12:
        raise BudgetExceeded(f"{len(props)} propositions is beyond exhaustive search", 0)
    tables = _Tables(cs, props, inds)
    explored = 0
    for n in range(1, max_states + 1):
        for fn_list in _structures(n, len(inds)):
            fns = dict(zip(inds, fn_list))
            found, count = _search_structure(tables, fns, n)
            explored += count
            if found is not None:
                return _build_model(props, fns, n, found)
            if budget is not None and explored > budget:
                raise BudgetExceeded("model search budget exhausted", explored)
    return None


def _search_structure(t: _Tables, fns: dict[str, tuple], n: int):
    full = np.ones(t.nvals, dtype=bool)
    dom = [t.initial.copy()] + [full.copy() for _ in range(n - 1)]
    edges = [(s, fn[s], t.pair[ind]) for ind, fn in fns.items() for s in range(n)]
    changed = True
    while changed:
        changed = False
        for s, u, mat in edges:
            if s == u:
                new = dom[s] & np.diagonal(mat)
                if not np.array_equal(new, dom[s]):
                    dom[s], changed = new, True
                continue
            sub = mat[np.ix_(dom[s], dom[u])] if dom[s].any() and dom[u].any() else None
            if sub is None:
                return None, 0
            ns = dom[s].copy()
            ns[dom[s]] = sub.any(axis=1)
            nu = dom[u].copy()
            nu[dom[u]] = sub.any(axis=0)
            if not np.array_equal(ns, dom[s]) or not np.array_equal(nu, dom[u]):
                dom[s], dom[u], changed = ns, nu, True
        if not all(d.any() for d in dom):
            return None, 0
    choices = [np.flatnonzero(d) for d in dom]
    grids = np.meshgrid(*choices, indexing="ij")
    cand = [g.ravel() for g in grids]
    ok = np.ones(cand[0].shape, dtype=bool)
    for s, u, mat in edges:
        ok &= mat[cand[s], cand[u]]
    if t.sometime and ok.any():
        tables: dict = {}
        for lhs, goal, ind in t.sometime:
            if ind not in tables:
                tables[ind] = _eventuality_table(fns, n, ind)
            pattern = np.zeros(cand[0].shape, dtype=np.int64)
            for s in range(n):
                pattern |= goal[cand[s]].astype(np.int64) << s
            fulfilled = tables[ind][pattern]
            for s in range(n):
                ok &= ~lhs[cand[s]] | ((fulfilled >> s) & 1).astype(bool)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None, int(ok.size)
    i = hits[0]
    return [int(c[i]) for c in cand], int(i) + 1


def _build_model(props, fns, n, codes) -> IndexedModel:
    val = {s: frozenset(p for b, p in enumerate(props) if (codes[s] >> b) & 1)
           for s in range(n)}
    return IndexedModel(
        states=tuple(range(n)),
        valuation=val,
        succ={ind: {s: fn[s] for s in range(n)} for ind, fn in fns.items()},
        root=0,
    )

"""Branching normal form: literals, the five clause shapes, and normalisation.

A :class:`ClauseSet` is a conjunction of clauses under an implicit outer
``A G``.  :func:`normalize` turns the looser :class:`RawClause` layer
(Boolean right-hand sides, a global ``A G`` loop, non-literal goals) into
strict clauses, inventing fresh propositions named ``_g<n>`` where needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .report import ValidationReport
from .formula import (
    AF, AG, AX, BOT, EF, EX, And, Atom, Bot, Formula, Implies, Not,
    Or, Start, Top, atoms, conj, disj, negate, temporal_depth,
)

FRESH_PREFIX = "_g"


class MalformedRaw(ValueError):
    """A raw clause nests temporal operators deeper than normalisation handles."""


@dataclass(frozen=True, order=True)
class Literal:
    prop: str
    negated: bool = False

    def complement(self) -> Literal:
        return Literal(self.prop, not self.negated)

    def to_formula(self) -> Formula:
        return Not(Atom(self.prop)) if self.negated else Atom(self.prop)

    def holds_in(self, true_props) -> bool:
        return (self.prop in true_props) != self.negated

    def __str__(self) -> str:
        return ("~" if self.negated else "") + self.prop


def lit(text: str) -> Literal:
    """``lit("~p")`` is a shorthand used throughout the tests."""
    text = text.strip()
    if text.startswith("~"):
        return Literal(text[1:].strip(), True)
    return Literal(text)


def lits(*texts: str) -> tuple[Literal, ...]:
    return tuple(lit(t) for t in texts)


@dataclass(frozen=True)
class Initial:
    rhs: tuple[Literal, ...]


@dataclass(frozen=True)
class AStep:
    lhs: tuple[Literal, ...]
    rhs: tuple[Literal, ...]


@dataclass(frozen=True)
class EStep:
    lhs: tuple[Literal, ...]
    rhs: tuple[Literal, ...]
    ind: str


@dataclass(frozen=True)
class ASometime:
    lhs: tuple[Literal, ...]
    goal: Literal


@dataclass(frozen=True)
class ESometime:
    lhs: tuple[Literal, ...]
    goal: Literal
    ind: str


Clause = Union[Initial, AStep, EStep, ASometime, ESometime]
CLAUSE_TYPES = (Initial, AStep, EStep, ASometime, ESometime)


@dataclass(frozen=True)
class ClauseSet:
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        if not isinstance(self.clauses, tuple):
            object.__setattr__(self, "clauses", tuple(self.clauses))

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __add__(self, other) -> ClauseSet:
        return ClauseSet(self.clauses + tuple(other))

    @property
    def initial(self) -> list[Initial]:
        return [c for c in self.clauses if isinstance(c, Initial)]

    @property
    def global_clauses(self) -> list[Clause]:
        return [c for c in self.clauses if not isinstance(c, Initial)]

    @property
    def sometime(self) -> list[ASometime | ESometime]:
        return [c for c in self.clauses if isinstance(c, (ASometime, ESometime))]


@dataclass(frozen=True)
class RawClause:
    """``lhs => rhs`` before normalisation.

    ``lhs`` is ``START`` or a classical formula; ``rhs`` is classical or one
    temporal operator applied to a classical formula.
    """
    lhs: Formula
    rhs: Formula


def clause_key(c: Clause) -> tuple:
    """Order- and duplicate-insensitive identity of a clause."""
    def norm(xs):
        return tuple(sorted(set(xs)))
    match c:
        case Initial(rhs):
            return ("I", norm(rhs))
        case AStep(lhs, rhs):
            return ("AX", norm(lhs), norm(rhs))
        case EStep(lhs, rhs, ind):
            return ("EX", norm(lhs), norm(rhs), ind)
        case ASometime(lhs, goal):
            return ("AF", norm(lhs), goal)
        case ESometime(lhs, goal, ind):
            return ("EF", norm(lhs), goal, ind)
    raise TypeError(f"not a clause: {c!r}")


def clause_multiset(cs: Iterable[Clause]) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for c in cs:
        k = clause_key(c)
        out[k] = out.get(k, 0) + 1
    return out


# ---------------------------------------------------------------- validation

def validate_clause_set(cs: ClauseSet) -> ValidationReport:
    """One message per shape violation; an empty report means strict BNF."""
    report = ValidationReport()
    for i, c in enumerate(cs):
        if not isinstance(c, CLAUSE_TYPES):
            report.errors.append(f"clause {i}: not one of the five clause shapes")
            continue
        for side in ("lhs", "rhs"):
            items = getattr(c, side, ())
            if not isinstance(items, tuple) or not all(isinstance(x, Literal) for x in items):
                report.errors.append(f"clause {i}: {side} must be a tuple of literals")
        if isinstance(c, (ASometime, ESometime)) and not isinstance(c.goal, Literal):
            report.errors.append(f"clause {i}: sometime goal not a literal")
        if isinstance(c, (EStep, ESometime)) and not (isinstance(c.ind, str) and c.ind):
            report.errors.append(f"clause {i}: index must be a nonempty name")
    return report


def free_symbols(cs: Iterable[Clause]) -> tuple[set[str], set[str]]:
    props: set[str] = set()
    inds: set[str] = set()
    for c in cs:
        for side in ("lhs", "rhs"):
            props.update(x.prop for x in getattr(c, side, ()))
        if isinstance(c, (ASometime, ESometime)):
            props.add(c.goal.prop)
        if isinstance(c, (EStep, ESometime)):
            inds.add(c.ind)
    return props, inds


# ------------------------------------------------------------ formula bridge

def _disj_of(ls) -> Formula:
    return disj([x.to_formula() for x in ls])


def _conj_of(ls) -> Formula:
    return conj([x.to_formula() for x in ls])


def clause_to_formula(c: Clause) -> Formula:
    """The clause as a formula; initial clauses give only their right side."""
    match c:
        case Initial(rhs):
            return _disj_of(rhs)
        case AStep(lhs, rhs):
            body = AX(_disj_of(rhs))
        case EStep(lhs, rhs, ind):
            body = EX(_disj_of(rhs), ind)
        case ASometime(lhs, goal):
            body = AF(goal.to_formula())
        case ESometime(lhs, goal, ind):
            body = EF(goal.to_formula(), ind)
        case _:
            raise TypeError(f"not a clause: {c!r}")
    if not lhs:
        return body
    return Implies(_conj_of(lhs), body)


def initial_formula(cs: ClauseSet) -> Formula:
    return conj([clause_to_formula(c) for c in cs.initial])


def global_formula(cs: ClauseSet) -> Formula:
    return conj([clause_to_formula(c) for c in cs.global_clauses])


def clause_set_to_formula(cs: ClauseSet) -> Formula:
    """``In & A G phi`` with ``In`` = ``T`` when there are no initial clauses."""
    return And((initial_formula(cs), AG(global_formula(cs))))


# ------------------------------------------------------------ normalisation

def fresh_names(prefix: str, taken: set[str]) -> Iterator[str]:
    for n in itertools.count(1):
        name = f"{prefix}{n}"
        if name not in taken:
            taken.add(name)
            yield name


def _is_classical(f: Formula) -> bool:
    return temporal_depth(f) == 0 and not _mentions_start(f)


def _mentions_start(f: Formula) -> bool:
    match f:
        case Start():
            return True
        case And(args) | Or(args):
            return any(_mentions_start(a) for a in args)
        case Implies(lhs, rhs):
            return _mentions_start(lhs) or _mentions_start(rhs)
        case Not(a) | AX(a) | EX(a, _) | AG(a) | AF(a) | EF(a, _):
            return _mentions_start(a)
    return False


def _nnf(f: Formula) -> Formula:
    match f:
        case Not(Atom()):
            return f
        case Not(Not(a)):
            return _nnf(a)
        case Not(a) if temporal_depth(a) == 0:
            return _nnf(negate(a))
        case And(args):
            return conj([_nnf(a) for a in args])
        case Or(args):
            return disj([_nnf(a) for a in args])
        case Implies(lhs, rhs):
            return disj([_nnf(negate(lhs)), _nnf(rhs)])
    return f


def _to_lit(f: Formula) -> Literal:
    if isinstance(f, Atom):
        return Literal(f.name)
    return Literal(f.arg.name, True)


def cnf(f: Formula) -> list[tuple[Literal, ...]]:
    """Clausal form of a classical formula.

    ``[]`` is ``T``; a member ``()`` is ``F_``.  Tautological disjunctions are
    dropped and literals come out sorted.
    """
    g = _nnf(f)
    sets = _cnf_sets(g)
    out: list[tuple[Literal, ...]] = []
    for s in sets:
        if any(x.complement() in s for x in s):
            continue
        t = tuple(sorted(s))
        if t not in out:
            out.append(t)
    return out


def _cnf_sets(g: Formula) -> list[frozenset]:
    match g:
        case Top():
            return []
        case Bot():
            return [frozenset()]
        case Atom() | Not():
            return [frozenset([_to_lit(g)])]
        case And(args):
            return [s for a in args for s in _cnf_sets(a)]
        case Or(args):
            acc = [frozenset()]
            for a in args:
                acc = [x | y for x in acc for y in _cnf_sets(a)]
            return acc
    raise MalformedRaw(f"not classical: {g}")


def dnf(f: Formula) -> list[tuple[Literal, ...]]:
    """Disjunction of literal conjunctions; ``[()]`` is ``T`` and ``[]`` is ``F_``."""
    return [tuple(c) for c in (
        tuple(sorted(x.complement() for x in d)) for d in cnf(negate(f)))]


def normalize(raw: Iterable[RawClause | Clause], taken: set[str] | None = None) -> ClauseSet:
    """Rewrite raw clauses into strict BNF, preserving input order.

    Strict clauses pass through unchanged, so normalisation is idempotent.
    Fresh names avoid every proposition in ``raw`` and in ``taken``.
    """
    raw = list(raw)
    used = set(taken or ())
    for r in raw:
        if isinstance(r, RawClause):
            used |= atoms(r.lhs) | atoms(r.rhs)
        else:
            used |= free_symbols([r])[0]
    fresh = fresh_names(FRESH_PREFIX, used)
    out: list[Clause] = []
    for r in raw:
        if isinstance(r, RawClause):
            _normalize_one(r.lhs, r.rhs, out, fresh)
        else:
            out.append(r)
    return ClauseSet(tuple(out))


def _global_classical(lhs: Formula, rhs: Formula, out: list) -> None:
    parts = cnf(disj([negate(lhs), rhs]))
    out.extend(Initial(d) for d in parts)
    out.extend(AStep((), d) for d in parts)


def _normalize_one(lhs: Formula, rhs: Formula, out: list, fresh) -> None:
    if isinstance(lhs, Start):
        if _is_classical(rhs):
            out.extend(Initial(d) for d in cnf(rhs))
            return
        x = next(fresh)
        out.append(Initial((Literal(x),)))
        _normalize_one(Atom(x), rhs, out, fresh)
        return
    if not _is_classical(lhs):
        raise MalformedRaw(f"left-hand side must be classical: {lhs}")
    if _is_classical(rhs):
        _global_classical(lhs, rhs, out)
        return
    terms = dnf(lhs)
    match rhs:
        case AX(arg) | EX(arg, _) if _is_classical(arg):
            for m in terms:
                for d in cnf(arg):
                    if isinstance(rhs, AX):
                        out.append(AStep(m, d))
                    else:
                        out.append(EStep(m, d, rhs.ind))
        case AF(arg) | EF(arg, _) if _is_classical(arg):
            goal = _nnf(arg)
            if isinstance(goal, Top):
                return
            if isinstance(goal, Bot):
                _global_classical(lhs, BOT, out)
                return
            if isinstance(goal, (Atom, Not)):
                g = _to_lit(goal)
            else:
                g = Literal(next(fresh))
                _global_classical(Atom(g.prop), goal, out)
            for m in terms:
                if isinstance(rhs, AF):
                    out.append(ASometime(m, g))
                else:
                    out.append(ESometime(m, g, rhs.ind))
        case AG(arg) if _is_classical(arg):
            z = Atom(next(fresh))
            _global_classical(lhs, conj([z, arg]), out)
            for d in cnf(conj([arg, z])):
                out.append(AStep((Literal(z.name),), d))
        case _:
            raise MalformedRaw(f"temporal nesting too deep: {lhs} => {rhs}")

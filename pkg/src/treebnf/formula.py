"""Formula syntax shared by the clause layer, the model checker and the tableau.

Formulas are immutable, hashable values.  ``sort_key`` gives the deterministic
structural-then-lexicographic order used whenever a choice has to be made.
"""

from __future__ import annotations

from dataclasses import dataclass


class Formula:
    __slots__ = ()

    def __invert__(self) -> Formula:
        return negate(self)

    def __and__(self, other: Formula) -> Formula:
        return conj([self, other])

    def __or__(self, other: Formula) -> Formula:
        return disj([self, other])

    def __lt__(self, other: Formula) -> bool:
        return sort_key(self) < sort_key(other)

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Start(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class AX(Formula):
    arg: Formula


@dataclass(frozen=True)
class EX(Formula):
    arg: Formula
    ind: str


@dataclass(frozen=True)
class AG(Formula):
    arg: Formula


@dataclass(frozen=True)
class AF(Formula):
    arg: Formula


@dataclass(frozen=True)
class EF(Formula):
    arg: Formula
    ind: str


TOP = Top()
BOT = Bot()
START = Start()

TEMPORAL = (AX, EX, AG, AF, EF)

_RANK = {Top: 0, Bot: 1, Start: 2, Atom: 3, Not: 4, And: 5, Or: 6, Implies: 7,
         AX: 8, EX: 9, AG: 10, AF: 11, EF: 12}


def size(f: Formula) -> int:
    match f:
        case Atom() | Top() | Bot() | Start():
            return 1
        case And(args) | Or(args):
            return 1 + sum(size(a) for a in args)
        case Implies(lhs, rhs):
            return 1 + size(lhs) + size(rhs)
        case Not(a) | AX(a) | EX(a, _) | AG(a) | AF(a) | EF(a, _):
            return 1 + size(a)
    raise TypeError(f"not a formula: {f!r}")


def _key(f: Formula) -> tuple:
    match f:
        case Atom(name):
            return (name,)
        case Top() | Bot() | Start():
            return ()
        case And(args) | Or(args):
            return tuple(sort_key(a) for a in args)
        case Implies(lhs, rhs):
            return (sort_key(lhs), sort_key(rhs))
        case EX(a, ind) | EF(a, ind):
            return (sort_key(a), ind)
        case Not(a) | AX(a) | AG(a) | AF(a):
            return (sort_key(a),)
    raise TypeError(f"not a formula: {f!r}")


_KEYS: dict[Formula, tuple] = {}


def sort_key(f: Formula) -> tuple:
    """Size first, then constructor, then children; total on formulas."""
    k = _KEYS.get(f)
    if k is None:
        k = (size(f), _RANK[type(f)], _key(f))
        _KEYS[f] = k
    return k


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.arg, Atom))


def conj(parts) -> Formula:
    """Flattening conjunction; drops ``T`` and collapses on ``F_``."""
    out: list[Formula] = []
    for p in parts:
        if isinstance(p, And):
            items = p.args
        else:
            items = (p,)
        for q in items:
            if isinstance(q, Bot):
                return BOT
            if not isinstance(q, Top) and q not in out:
                out.append(q)
    if not out:
        return TOP
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(parts) -> Formula:
    out: list[Formula] = []
    for p in parts:
        items = p.args if isinstance(p, Or) else (p,)
        for q in items:
            if isinstance(q, Top):
                return TOP
            if not isinstance(q, Bot) and q not in out:
                out.append(q)
    if not out:
        return BOT
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def negate(f: Formula) -> Formula:
    """Negation pushed through the classical connectives only.

    Temporal operators are wrapped in ``Not`` rather than dualised, since the
    normal form has no duals for them.
    """
    match f:
        case Top():
            return BOT
        case Bot():
            return TOP
        case Not(a):
            return a
        case And(args):
            return disj([negate(a) for a in args])
        case Or(args):
            return conj([negate(a) for a in args])
        case Implies(lhs, rhs):
            return conj([lhs, negate(rhs)])
    return Not(f)


def atoms(f: Formula) -> set[str]:
    match f:
        case Atom(name):
            return {name}
        case Top() | Bot() | Start():
            return set()
        case And(args) | Or(args):
            return set().union(*(atoms(a) for a in args))
        case Implies(lhs, rhs):
            return atoms(lhs) | atoms(rhs)
        case Not(a) | AX(a) | EX(a, _) | AG(a) | AF(a) | EF(a, _):
            return atoms(a)
    raise TypeError(f"not a formula: {f!r}")


def indices(f: Formula) -> set[str]:
    match f:
        case EX(a, ind) | EF(a, ind):
            return {ind} | indices(a)
        case And(args) | Or(args):
            return set().union(*(indices(a) for a in args))
        case Implies(lhs, rhs):
            return indices(lhs) | indices(rhs)
        case Not(a) | AX(a) | AG(a) | AF(a):
            return indices(a)
    return set()


def temporal_depth(f: Formula) -> int:
    match f:
        case And(args) | Or(args):
            return max((temporal_depth(a) for a in args), default=0)
        case Implies(lhs, rhs):
            return max(temporal_depth(lhs), temporal_depth(rhs))
        case Not(a):
            return temporal_depth(a)
        case AX(a) | EX(a, _) | AG(a) | AF(a) | EF(a, _):
            return 1 + temporal_depth(a)
    return 0


def show(f: Formula) -> str:
    """ASCII rendering in the clause-document operator spelling."""
    match f:
        case Atom(name):
            return name
        case Top():
            return "T"
        case Bot():
            return "F_"
        case Start():
            return "start"
        case Not(a):
            return "~" + _paren(a)
        case And(args):
            return " & ".join(_paren(a) for a in args)
        case Or(args):
            return " | ".join(_paren(a) for a in args)
        case Implies(lhs, rhs):
            return f"{_paren(lhs)} => {_paren(rhs)}"
        case AX(a):
            return f"A X {_paren(a)}"
        case EX(a, ind):
            return f"E X <{ind}> {_paren(a)}"
        case AG(a):
            return f"A G {_paren(a)}"
        case AF(a):
            return f"A F {_paren(a)}"
        case EF(a, ind):
            return f"E F <{ind}> {_paren(a)}"
    raise TypeError(f"not a formula: {f!r}")


def _paren(f: Formula) -> str:
    if isinstance(f, (And, Or, Implies)):
        return f"({show(f)})"
    return show(f)

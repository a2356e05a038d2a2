"""Plain-text documents for clause sets and automata.

Clause documents hold one clause per line::

    start => q1
    q1 => E X <ind1> (q2)
    u => E F <ind1> l
    p & q => A X (r | s)
    v => p | r          # classical right side, normalised on the way in

Automaton documents are split into sections whose headers stand alone on a
line; ``TRANS`` lines read ``s0 , {p, r} , 2 -> (s0, s1)``.  ``#`` starts a
comment in both formats.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .automata import BuchiTreeAutomaton, Transition
from .bnf import (
    ASometime, AStep, ClauseSet, ESometime, EStep, Initial, Literal, RawClause, free_symbols,
    normalize,
)
from .formula import conj, disj
from .modelcheck import IndexedModel

RESERVED = {"start", "T", "F_", "A", "E", "X", "F", "G"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "num", "op" or "end"
    text: str
    col: int


_TOKEN = re.compile(r"\s*(?:(=>|->|[&|~()<>{},:])|([A-Za-z_][A-Za-z0-9_]*)|(\d+))")


def _tokens(text: str, line: int) -> list[Token]:
    out: list[Token] = []
    pos = 0
    text = text.split("#", 1)[0].rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        op, word, num = m.groups()
        kind, group = ("op", 1) if op else ("id", 2) if word else ("num", 3)
        out.append(Token(kind, m.group(group), m.start(group) + 1))
        pos = m.end()
    out.append(Token("end", "end of line", len(text) + 1))
    return out


class _Cursor:
    def __init__(self, tokens: list[Token], line: int):
        self.toks = tokens
        self.i = 0
        self.line = line

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str, ahead: int = 0) -> bool:
        j = self.i + ahead
        return j < len(self.toks) and self.toks[j].text == text

    def fail(self, expected: str):
        tok = self.peek
        found = tok.text if tok.kind != "end" else "end of line"
        raise ParseError(f"expected {expected}, found {found!r}", self.line, tok.col)

    def take(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        tok = self.peek
        self.i += 1
        return tok

    def ident(self, what: str = "identifier", allow_reserved: bool = False) -> str:
        tok = self.peek
        if tok.kind != "id" or (not allow_reserved and tok.text in RESERVED):
            self.fail(what)
        self.i += 1
        return tok.text

    def end(self):
        if self.peek.kind != "end":
            self.fail("end of line")


# ------------------------------------------------------------------ clauses

def _lit(c: _Cursor) -> Literal | str:
    """A literal, or the constants ``"T"`` / ``"F_"``."""
    if c.at("T") or c.at("F_"):
        return c.ident(allow_reserved=True)
    neg = False
    if c.at("~"):
        c.take("~")
        neg = True
    return Literal(c.ident("proposition"), neg)


def _items(c: _Cursor, sep: str, unit: str) -> tuple[Literal, ...]:
    """``lit {sep lit}``; the constant ``unit`` may only appear alone."""
    col = c.peek.col
    items = [_lit(c)]
    while c.at(sep):
        c.take(sep)
        items.append(_lit(c))
    consts = [x for x in items if isinstance(x, str)]
    if consts:
        if len(items) == 1 and consts[0] == unit:
            return ()
        raise ParseError(f"{consts[0]} may only stand alone as {unit}", c.line, col)
    return tuple(items)


def _goal(c: _Cursor) -> Literal:
    col = c.peek.col
    x = _lit(c)
    if isinstance(x, str):
        raise ParseError("sometime goal must be a literal", c.line, col)
    return x


def _bracketed_disj(c: _Cursor) -> tuple[Literal, ...]:
    if c.at("("):
        c.take("(")
        out = _items(c, "|", "F_")
        c.take(")")
        return out
    return _items(c, "|", "F_")


def _index(c: _Cursor) -> str:
    c.take("<")
    ind = c.ident("index name", allow_reserved=True)
    c.take(">")
    return ind


def parse_clause(text: str, line: int = 1):
    """One clause line; a classical right side yields a :class:`RawClause`."""
    c = _Cursor(_tokens(text, line), line)
    if c.at("start"):
        c.take("start")
        c.take("=>")
        rhs = _items(c, "|", "F_")
        c.end()
        return Initial(rhs)
    lhs = _items(c, "&", "T")
    c.take("=>")
    if c.at("A") and c.at("X", 1):
        c.i += 2
        out = AStep(lhs, _bracketed_disj(c))
    elif c.at("E") and c.at("X", 1):
        c.i += 2
        ind = _index(c)
        out = EStep(lhs, _bracketed_disj(c), ind)
    elif c.at("A") and c.at("F", 1):
        c.i += 2
        out = ASometime(lhs, _goal(c))
    elif c.at("E") and c.at("F", 1):
        c.i += 2
        ind = _index(c)
        out = ESometime(lhs, _goal(c), ind)
    elif c.at("~") or c.peek.kind == "id" and c.peek.text not in {"A", "E", "X", "F", "G"}:
        rhs = _items(c, "|", "F_")
        out = RawClause(conj([x.to_formula() for x in lhs]),
                        disj([x.to_formula() for x in rhs]))
    else:
        c.fail("'A X', 'E X', 'A F', 'E F' or a disjunction of literals")
    c.end()
    return out


def parse_clauses(text: str) -> ClauseSet:
    parsed = []
    for n, raw in enumerate(text.splitlines(), 1):
        if raw.split("#", 1)[0].strip():
            parsed.append(parse_clause(raw, n))
    return normalize(parsed)


def _show_lits(ls, sep: str, unit: str) -> str:
    return f" {sep} ".join(str(x) for x in ls) if ls else unit


def print_clause(c) -> str:
    match c:
        case Initial(rhs):
            return f"start => {_show_lits(rhs, '|', 'F_')}"
        case AStep(lhs, rhs):
            return f"{_show_lits(lhs, '&', 'T')} => A X ({_show_lits(rhs, '|', 'F_')})"
        case EStep(lhs, rhs, ind):
            return f"{_show_lits(lhs, '&', 'T')} => E X <{ind}> ({_show_lits(rhs, '|', 'F_')})"
        case ASometime(lhs, goal):
            return f"{_show_lits(lhs, '&', 'T')} => A F {goal}"
        case ESometime(lhs, goal, ind):
            return f"{_show_lits(lhs, '&', 'T')} => E F <{ind}> {goal}"
    raise TypeError(f"not a clause: {c!r}")


def print_clauses(cs: ClauseSet, header: bool = True) -> str:
    lines = []
    if header:
        props, inds = free_symbols(cs)
        lines.append("# propositions: " + " ".join(sorted(props)))
        lines.append("# indices: " + " ".join(sorted(inds)))
    lines += [print_clause(c) for c in cs]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- automata

SECTIONS = ("ALPHABET", "DEGREES", "STATES", "INITIAL", "ACCEPTING", "LABELS", "TRANS")
REQUIRED = ("ALPHABET", "DEGREES", "STATES")


def _symbol(c: _Cursor) -> frozenset[str]:
    c.take("{")
    props = []
    if not c.at("}"):
        props.append(c.ident("proposition"))
        while c.at(","):
            c.take(",")
            props.append(c.ident("proposition"))
    c.take("}")
    return frozenset(props)


def _sep(c: _Cursor):
    if c.at(","):
        c.take(",")


def parse_automaton(text: str) -> BuchiTreeAutomaton:
    body: dict[str, list[tuple[int, str]]] = {}
    current = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in SECTIONS:
            if line in body:
                raise ParseError(f"section {line} appears twice", n, 1)
            current = line
            body[current] = []
        elif current is None:
            raise ParseError("expected a section header", n, 1)
        else:
            body[current].append((n, raw))
    for name in REQUIRED:
        if name not in body:
            raise ParseError(f"missing section {name}", len(text.splitlines()) + 1, 1)

    def cursors(name):
        for n, raw in body.get(name, []):
            yield _Cursor(_tokens(raw, n), n)

    alphabet: list[frozenset[str]] = []
    for c in cursors("ALPHABET"):
        while c.peek.kind != "end":
            sym = _symbol(c)
            if sym not in alphabet:
                alphabet.append(sym)
            _sep(c)
    degrees: list[int] = []
    for c in cursors("DEGREES"):
        while c.peek.kind != "end":
            tok = c.peek
            if tok.kind != "num" or int(tok.text) < 1:
                c.fail("positive degree")
            c.i += 1
            degrees.append(int(tok.text))
            _sep(c)

    def names(section, declared=None):
        out = []
        for c in cursors(section):
            while c.peek.kind != "end":
                col = c.peek.col
                s = c.ident("state name")
                if declared is not None and s not in declared:
                    raise ParseError(f"undeclared state {s!r}", c.line, col)
                out.append(s)
                _sep(c)
        return out

    states = names("STATES")
    declared = set(states)
    initial = names("INITIAL", declared)
    accepting = names("ACCEPTING", declared)

    labels = None
    if "LABELS" in body:
        labels = {}
        for c in cursors("LABELS"):
            col = c.peek.col
            s = c.ident("state name")
            if s not in declared:
                raise ParseError(f"undeclared state {s!r}", c.line, col)
            c.take(":")
            labels[s] = _symbol(c)
            c.end()

    transitions = []
    for c in cursors("TRANS"):
        col = c.peek.col
        src = c.ident("state name")
        if src not in declared:
            raise ParseError(f"undeclared state {src!r}", c.line, col)
        c.take(",")
        col = c.peek.col
        sym = _symbol(c)
        if sym not in alphabet:
            raise ParseError(f"symbol {sorted(sym)} is not in the alphabet", c.line, col)
        c.take(",")
        tok = c.peek
        if tok.kind != "num":
            c.fail("degree")
        c.i += 1
        d = int(tok.text)
        if d not in degrees:
            raise ParseError(f"degree {d} is not declared", c.line, tok.col)
        c.take("->")
        c.take("(")
        kids = []
        while True:
            col = c.peek.col
            k = c.ident("state name")
            if k not in declared:
                raise ParseError(f"undeclared state {k!r}", c.line, col)
            kids.append(k)
            if c.at(","):
                c.take(",")
                continue
            break
        end = c.take(")")
        c.end()
        if len(kids) != d:
            raise ParseError(f"tuple of length {len(kids)} under degree {d}", c.line, end.col)
        transitions.append(Transition(src, sym, d, tuple(kids)))
    return BuchiTreeAutomaton(
        alphabet=tuple(alphabet),
        degrees=tuple(degrees),
        states=tuple(states),
        transitions=tuple(transitions),
        initial=tuple(initial),
        accepting=tuple(accepting),
        labels=labels,
    )


def _show_symbol(sym) -> str:
    return "{" + ", ".join(sorted(sym)) + "}"


def print_automaton(a: BuchiTreeAutomaton) -> str:
    lines = ["ALPHABET", " ".join(_show_symbol(s) for s in a.alphabet),
             "DEGREES", " ".join(str(d) for d in a.degrees),
             "STATES", " ".join(a.states),
             "INITIAL", " ".join(a.initial),
             "ACCEPTING", " ".join(a.accepting)]
    if a.labels is not None:
        lines.append("LABELS")
        lines += [f"{s} : {_show_symbol(lab)}" for s, lab in a.labels.items()]
    lines.append("TRANS")
    lines += [f"{t.source} , {_show_symbol(t.symbol)} , {t.degree} -> ({', '.join(t.children)})"
              for t in a.transitions]
    return "\n".join(line for line in lines if line) + "\n"


def looks_like_automaton(text: str) -> bool:
    return any(line.strip() in SECTIONS for line in text.splitlines())


# ------------------------------------------------------------------ models

def _state_name(c: _Cursor):
    tok = c.peek
    if tok.kind == "num":
        c.i += 1
        return int(tok.text)
    return c.ident("state name")


def parse_model(text: str) -> IndexedModel:
    """Model documents::

        ROOT 0
        STATE 0 : {p}
        STATE 1 : {}
        SUCC f : 0 -> 1
        SUCC f : 1 -> 0
    """
    root = None
    states: list = []
    valuation: dict = {}
    succ: dict[str, dict] = {}
    pending = []
    for n, raw in enumerate(text.splitlines(), 1):
        c = _Cursor(_tokens(raw, n), n)
        if c.peek.kind == "end":
            continue
        key = c.ident("ROOT, STATE or SUCC", allow_reserved=True)
        if key == "ROOT":
            root = (_state_name(c), n)
        elif key == "STATE":
            s = _state_name(c)
            c.take(":")
            states.append(s)
            valuation[s] = _symbol(c)
        elif key == "SUCC":
            ind = c.ident("index name", allow_reserved=True)
            c.take(":")
            col = c.peek.col
            src = _state_name(c)
            c.take("->")
            col2 = c.peek.col
            dst = _state_name(c)
            pending.append((ind, src, dst, n, col, col2))
        else:
            raise ParseError(f"unknown keyword {key!r}", n, 1)
        c.end()
    declared = set(states)
    for ind, src, dst, n, col, col2 in pending:
        for s, where in ((src, col), (dst, col2)):
            if s not in declared:
                raise ParseError(f"undeclared state {s!r}", n, where)
        table = succ.setdefault(ind, {})
        if src in table:
            raise ParseError(f"{ind}-successor of {src!r} given twice", n, col)
        table[src] = dst
    if root is None:
        raise ParseError("missing ROOT line", len(text.splitlines()) + 1, 1)
    if root[0] not in declared:
        raise ParseError(f"undeclared state {root[0]!r}", root[1], 6)
    return IndexedModel(states=tuple(states), valuation=valuation, succ=succ, root=root[0])


def print_model(m: IndexedModel) -> str:
    lines = [f"ROOT {m.root}"]
    lines += [f"STATE {s} : {_show_symbol(m.valuation[s])}" for s in m.states]
    lines += [f"SUCC {ind} : {s} -> {m.succ[ind][s]}" for ind in m.indices for s in m.states]
    return "\n".join(lines) + "\n"

"""Büchi tree automata: data model, validation, emptiness and a run oracle."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .report import ValidationReport

Symbol = frozenset  # a letter is the set of propositions it makes true


def symbol(*props: str) -> frozenset[str]:
    return frozenset(props)


@dataclass(frozen=True)
class Transition:
    source: str
    symbol: frozenset[str]
    degree: int
    children: tuple[str, ...]


@dataclass(frozen=True)
class BuchiTreeAutomaton:
    """``<alphabet, degrees, states, delta, initial, accepting>``.

    ``labels`` optionally pins the valuation of each state over the alphabet's
    propositions; when absent the encoder derives labels from the transitions.
    """
    alphabet: tuple[frozenset[str], ...]
    degrees: tuple[int, ...]
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    initial: tuple[str, ...]
    accepting: tuple[str, ...]
    labels: Mapping[str, frozenset[str]] | None = field(default=None, hash=False)

    def delta(self, state: str, sym: frozenset[str], degree: int) -> list[tuple[str, ...]]:
        return [t.children for t in self.transitions
                if t.source == state and t.symbol == sym and t.degree == degree]

    def moves(self, state: str) -> list[Transition]:
        return [t for t in self.transitions if t.source == state]

    @property
    def props(self) -> list[str]:
        """Label universe: every proposition occurring in some letter."""
        return sorted(set().union(*self.alphabet)) if self.alphabet else []

    def with_accepting(self, accepting) -> BuchiTreeAutomaton:
        return replace(self, accepting=tuple(accepting))


def validate_automaton(a: BuchiTreeAutomaton) -> ValidationReport:
    report = ValidationReport()
    states = set(a.states)
    if len(states) != len(a.states):
        report.errors.append("duplicate state names")
    if any(d < 1 for d in a.degrees):
        report.errors.append("branching degrees must be positive")
    for s in a.initial:
        if s not in states:
            report.errors.append(f"initial state {s!r} is not a state")
    for s in a.accepting:
        if s not in states:
            report.errors.append(f"accepting state {s!r} is not a state")
    for i, t in enumerate(a.transitions):
        where = f"transition {i} ({t.source})"
        if t.source not in states:
            report.errors.append(f"{where}: unknown source state")
        if t.symbol not in a.alphabet:
            report.errors.append(f"{where}: symbol {sorted(t.symbol)} not in alphabet")
        if t.degree not in a.degrees:
            report.errors.append(f"{where}: degree {t.degree} not in D")
        if len(t.children) != t.degree:
            report.errors.append(
                f"{where}: tuple of length {len(t.children)} under degree {t.degree}")
        for c in t.children:
            if c not in states:
                report.errors.append(f"{where}: unknown child state {c!r}")
    if a.labels is not None:
        universe = set(a.props)
        for s, lab in a.labels.items():
            if s not in states:
                report.errors.append(f"label for unknown state {s!r}")
            elif not set(lab) <= universe:
                report.errors.append(f"label of {s!r} uses propositions outside the alphabet")
    if not a.initial:
        report.warnings.append("no initial state")
    return report


def accepting_region(a: BuchiTreeAutomaton) -> set[str]:
    """States from which an accepting run exists.

    Greatest fixpoint over Y of the least fixpoint over Z of the states having
    a move whose children all lie in ``(accepting & Y) | Z``.
    """
    accepting = set(a.accepting)
    moves = {s: [t.children for t in a.moves(s)] for s in a.states}
    y = set(a.states)
    while True:
        good = accepting & y
        z: set[str] = set()
        while True:
            nz = {s for s in a.states
                  if any(all(c in good or c in z for c in ch) for ch in moves[s])}
            if nz == z:
                break
            z = nz
        if z == y:
            return y
        y = z


def is_empty(a: BuchiTreeAutomaton) -> bool:
    region = accepting_region(a)
    return not any(s in region for s in a.initial)


@dataclass(frozen=True)
class RegularRun:
    """Finite graph presentation of an infinite run; cycles are allowed."""
    root: int
    label: dict[int, str]
    move: dict[int, Transition]
    children: dict[int, tuple[int, ...]]

    @property
    def nodes(self) -> list[int]:
        return sorted(self.label)


def run_problems(a: BuchiTreeAutomaton, run: RegularRun) -> list[str]:
    """Audit a run: licensed moves, initial root, every cycle through F_B."""
    out = []
    if run.label.get(run.root) not in a.initial:
        out.append("root is not labelled by an initial state")
    for n in run.nodes:
        t = run.move[n]
        kids = run.children[n]
        if t not in a.transitions or t.source != run.label[n]:
            out.append(f"node {n}: move not in delta")
        if tuple(run.label[k] for k in kids) != t.children:
            out.append(f"node {n}: children do not match the chosen tuple")
    accepting = set(a.accepting)
    rest = {n for n in run.nodes if run.label[n] not in accepting}
    if _has_cycle(rest, lambda n: run.children[n]):
        out.append("a cycle avoids every accepting state")
    return out


def _has_cycle(nodes, succ) -> bool:
    colour: dict = {}
    for start in nodes:
        if start in colour:
            continue
        stack = [(start, iter(succ(start)))]
        colour[start] = 1
        while stack:
            n, it = stack[-1]
            for m in it:
                if m not in nodes:
                    continue
                if colour.get(m) == 1:
                    return True
                if m not in colour:
                    colour[m] = 1
                    stack.append((m, iter(succ(m))))
                    break
            else:
                colour[n] = 2
                stack.pop()
    return False


def find_accepting_run_bounded(a: BuchiTreeAutomaton, max_nodes: int) -> RegularRun | None:
    """Exhaustive search for a run graph with at most ``max_nodes`` nodes.

    Runs are searched in memoryless form: one node per automaton state, one
    chosen move per node.  Every backtracking branch is explored, so ``None``
    means no such run exists within the bound.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    accepting = set(a.accepting)
    moves = {s: a.moves(s) for s in a.states}

    def reachable(root, choice):
        seen, order = {root}, [root]
        for s in order:
            if s in choice:
                for c in choice[s].children:
                    if c not in seen:
                        seen.add(c)
                        order.append(c)
        return order

    def bad_cycle(choice):
        rest = {s for s in choice if s not in accepting}
        return _has_cycle(rest, lambda s: choice[s].children)

    def search(root, choice):
        order = reachable(root, choice)
        if len(order) > max_nodes or bad_cycle(choice):
            return None
        pending = [s for s in order if s not in choice]
        if not pending:
            return choice
        s = pending[0]
        for t in moves[s]:
            choice[s] = t
            found = search(root, choice)
            if found is not None:
                return found
            del choice[s]
        return None

    for root in a.initial:
        choice = search(root, {})
        if choice is not None:
            order = reachable(root, choice)
            ids = {s: i for i, s in enumerate(order)}
            return RegularRun(
                root=0,
                label={i: s for s, i in ids.items()},
                move={ids[s]: choice[s] for s in order},
                children={ids[s]: tuple(ids[c] for c in choice[s].children) for s in order},
            )
    return None

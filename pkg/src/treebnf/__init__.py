"""Branching normal form clauses, Büchi tree automata and the translations between them."""

from .automata import (
    BuchiTreeAutomaton, RegularRun, Transition, accepting_region, find_accepting_run_bounded,
    is_empty, run_problems, symbol, validate_automaton,
)
from .bnf import (
    ASometime, AStep, ClauseSet, ESometime, EStep, Initial, Literal, MalformedRaw, RawClause,
    clause_multiset, clause_set_to_formula, lit, lits, normalize, validate_clause_set,
)
from .encode import (
    POSITIONAL, SUCCESSOR, EmptyAcceptingWarning, EmptyInitial, LabelConflict, DegreeOverflow,
    characteristic_clause_set, make_encoding,
)
from .modelcheck import (
    BudgetExceeded, IndexedModel, UnknownIndex, check_clause_set, enumerate_models, holds,
)
from .tableau import (
    EmptyTableau, Eventuality, Tableau, augment, build_tableau, decide, extract_automaton,
    extract_model, gfl_closure, is_pseudo_fulfilled, is_satisfiable, reduce,
)
from .textio import (
    ParseError, parse_automaton, parse_clauses, parse_model, print_automaton, print_clauses,
    print_model,
)

__all__ = [name for name in dir() if not name.startswith("_")]

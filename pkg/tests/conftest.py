from pathlib import Path

import pytest

from treebnf.textio import parse_automaton

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def worked():
    return parse_automaton((DATA / "worked.aut").read_text())


@pytest.fixture
def worked_no_accepting():
    return parse_automaton((DATA / "worked_no_accepting.aut").read_text())

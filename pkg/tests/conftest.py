from pathlib import Path

import pytest
from hypothesis import strategies as st

from mhsem.syntax import Atom, GroundProgram, Rule, load_ground

DATA = Path(__file__).parent / "data"

_acceptance: dict[str, str] = {}


def load(name: str) -> GroundProgram:
    return load_ground((DATA / f"{name}.lp").read_text())


def atoms(*names: str) -> frozenset[Atom]:
    return frozenset(Atom(n) for n in names)


@pytest.fixture
def vacation():
    return load("vacation")


@pytest.fixture
def stubborn():
    return load("vacation_stubborn")


@pytest.fixture
def passport():
    return load("passport")


@pytest.fixture
def abc():
    return load("abc")


@pytest.fixture
def akt():
    return load("akt")


@st.composite
def programs(draw, max_atoms: int = 5, max_rules: int = 8, max_body: int = 3, denials: bool = False):
    """Propositional ground programs over atoms a, b, c, ..."""
    pool = [Atom(c) for c in "abcdefgh"[:max_atoms]]
    n = draw(st.integers(0, max_rules))
    rules = []
    for _ in range(n):
        head = draw(st.sampled_from(pool + [None]) if denials else st.sampled_from(pool))
        pos = draw(st.frozensets(st.sampled_from(pool), max_size=max_body))
        neg = draw(st.frozensets(st.sampled_from(pool), max_size=max_body))
        if head is None and not (pos or neg):
            continue
        rules.append(Rule(head, pos, neg))
    return GroundProgram.from_rules(rules)


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")

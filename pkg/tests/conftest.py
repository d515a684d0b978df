from __future__ import annotations

from pathlib import Path

import pytest

from levelcontract import formats
from levelcontract.oracle import EnumerationBounds, enumerate_valid_graphs

FIXTURES = Path(__file__).parent / "fixtures"


def load(name: str):
    return formats.parse((FIXTURES / name).read_text(encoding="utf-8"))


# the small sweep used by per-module property tests; the acceptance module runs the big one
SMALL_BOUNDS = EnumerationBounds(
    max_vertices=3, max_edges=3, max_genus=2, max_slope=2, max_order=5, max_levels=3, max_step=2
)


@pytest.fixture(scope="session")
def small_graphs():
    return list(enumerate_valid_graphs(SMALL_BOUNDS))


@pytest.fixture
def g1():
    return load("g1.graph")


@pytest.fixture
def g2():
    return load("g2.graph")


@pytest.fixture
def g3():
    return load("g3.graph")


@pytest.fixture
def g1p():
    return load("g1p.graph")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from lpp.graph import SimpleGraph, graph_from_edgelist

DATA = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def five_vertex_graph():
    return graph_from_edgelist((DATA / "five_vertex.edgelist").read_text())


@st.composite
def graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    m = n * (n - 1) // 2
    bits = draw(st.lists(st.booleans(), min_size=m, max_size=m))
    return SimpleGraph(n, np.array(bits, dtype=bool))


_ACCEPTANCE: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if item.module.__name__.endswith("test_acceptance") and item.name.startswith("test_ac"):
            doc = (item.function.__doc__ or "").strip().splitlines()
            title = doc[0] if doc else item.name
            if "[" in item.name:
                title += " " + item.name[item.name.index("["):]
            _ACCEPTANCE[item.nodeid] = title


def pytest_terminal_summary(terminalreporter):
    outcome = {}
    for key in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.nodeid in _ACCEPTANCE and (rep.when == "call" or key != "passed"):
                outcome[rep.nodeid] = "PASS" if key == "passed" else "FAIL"
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, title in _ACCEPTANCE.items():
        if nodeid in outcome:
            terminalreporter.write_line(f"{outcome[nodeid]} {title}")

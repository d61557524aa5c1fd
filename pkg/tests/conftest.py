import pytest

from chromatlas.chromatic import ChromaticEngine
from chromatlas.enumerate import enumerate_connected
from chromatlas.graph import Graph


def paw() -> Graph:
    # triangle 0-1-2 with pendant 3 on vertex 2
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])


def graph_from(n, edges):
    return Graph.from_edges(n, edges)


@pytest.fixture(scope="session")
def engine():
    return ChromaticEngine()


@pytest.fixture(scope="session")
def small_graphs():
    """All connected graphs with n <= 7, keyed by order."""
    return {n: list(enumerate_connected(n)) for n in range(1, 8)}


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)

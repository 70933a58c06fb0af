import io
import sys

import numpy as np
import pytest

from grouprop.graph import Graph


def text(s: str) -> io.StringIO:
    return io.StringIO(s)


def complete(n: int) -> Graph:
    iu, ju = np.triu_indices(n, k=1)
    return Graph.from_edges(n, np.column_stack([iu, ju]))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def disjoint_cliques(count: int, size: int) -> Graph:
    edges = []
    for c in range(count):
        base = c * size
        edges += [(base + i, base + j) for i in range(size) for j in range(i + 1, size)]
    return Graph.from_edges(count * size, edges)


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, np.column_stack([iu[keep], ju[keep]]))


@pytest.fixture
def k4_minus_edge() -> Graph:
    # node 0 is the apex; the base edge 1-2 is missing
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])

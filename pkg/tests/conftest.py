import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from surveydrift.graph import Graph


def brute_force_mis(g: Graph) -> int:
    """Size of a maximum independent set by exhaustive search (small graphs only)."""
    n = g.n_vertices
    adj = [set(g.undirected.neighbors(v).tolist()) for v in range(n)]
    for size in range(n, 0, -1):
        for combo in itertools.combinations(range(n), size):
            if all(b not in adj[a] for a, b in itertools.combinations(combo, 2)):
                return size
    return 0


@st.composite
def small_graphs(draw, max_n=10, directed=False):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph.from_edges(n, np.array(chosen, dtype=np.int64).reshape(-1, 2), directed)


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def report(label: str, ok, detail: str) -> bool:
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        line = f"{status} {label}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from lapsep.graph_core import Graph

DATA = __import__("pathlib").Path(__file__).parent / "data"


def random_graph(rng, n, p=0.5, weighted=False):
    upper = np.triu(rng.random((n, n)) < p, 1).astype(float)
    if weighted:
        upper *= rng.random((n, n))
    return Graph(upper + upper.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def graph_with_min_degree(rng, n, d):
    """Random unweighted graph with a vertex of degree exactly ``d``, nontrivial."""
    while True:
        g = random_graph(rng, n, rng.uniform(0.2, 0.95))
        adj = g.adj.copy()
        v = int(rng.integers(n))
        adj[v, :] = adj[:, v] = 0
        nbrs = rng.choice([u for u in range(n) if u != v], size=d, replace=False)
        adj[v, nbrs] = adj[nbrs, v] = 1
        h = Graph(adj)
        if not h.is_trivial():
            return h


def graph_with_max_degree(rng, n, d):
    """Random noncomplete unweighted graph with a vertex of degree exactly ``d``."""
    from lapsep.graph_core import complement

    while True:
        h = complement(graph_with_min_degree(rng, n, n - 1 - d))
        if not h.is_complete() and not h.is_trivial():
            return h


# acceptance results: criterion number -> list of (ok, detail)
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion, ok, detail):
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"{status} criterion {k}: " + "; ".join(d for _, d in parts))

from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import strategies as st

from diam4.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(h.nodes)}
    return Graph.from_edges(len(idx), [(idx[u], idx[v]) for u, v in h.edges])


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8, connected: bool = False) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, c in zip(pairs, chosen) if c]
    if connected:
        # a random spanning path keeps the draw connected
        order = draw(st.permutations(range(n)))
        edges += [(order[i], order[i + 1]) for i in range(n - 1)]
    return Graph.from_edges(n, set(tuple(sorted(e)) for e in edges))


@pytest.fixture
def s62() -> Graph:
    from diam4.graph import make_snk

    return make_snk(6, 2)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[num])

import numpy as np
import pytest
from hypothesis import strategies as st

from securegraph.graph import StorageGraph
from securegraph.instances import load_instance

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def instance():
    return load_instance


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@st.composite
def storage_graphs(draw, max_k=4, max_nodes=7):
    K = draw(st.integers(1, max_k))
    M = draw(st.integers(1, K))
    n = draw(st.integers(2, max_nodes))
    names = [f"N{i}" for i in range(n)]
    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1:]]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=len(pairs), unique=True))
    edges = []
    for a, b in chosen:
        if draw(st.booleans()):
            label = frozenset()
        else:
            label = frozenset(draw(st.sets(st.integers(1, K), min_size=M, max_size=M)))
        if draw(st.booleans()):
            a, b = b, a
        edges.append((a, b, label))
    return StorageGraph.from_edges(K, M, edges)

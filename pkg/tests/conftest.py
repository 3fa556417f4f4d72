import networkx as nx
import numpy as np
import pytest

from netimmune import Graph


@pytest.fixture
def k2():
    return Graph(2, [(0, 1)])


@pytest.fixture
def p3():
    return Graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def k3():
    return Graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def k4():
    return Graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def c4():
    return Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def star5():
    """Hub 0 with 4 leaves."""
    return Graph(5, [(0, i) for i in range(1, 5)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi instance as a Graph (may be disconnected or edgeless)."""
    nxg = nx.gnp_random_graph(n, p, seed=seed)
    return Graph(n, list(nxg.edges()))


def random_connected_graph(n: int, seed: int) -> Graph:
    """Connected Erdos-Renyi instance (resamples until connected)."""
    rng = np.random.default_rng(seed)
    while True:
        p = rng.uniform(0.25, 0.7)
        nxg = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))
        if n == 1 or nx.is_connected(nxg):
            return Graph(n, list(nxg.edges()))

"""Shortest-path centralities (closeness, betweenness) used as immunization baselines."""

from __future__ import annotations

import networkx as nx

from .graph import Graph, Ranking, Strategy


def to_networkx(g: Graph) -> nx.Graph:
    """networkx view of a Graph (nodes 0..n-1, including isolates)."""
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    return nxg


def closeness_ranking(g: Graph) -> Ranking:
    """Rank by component-local closeness: (n_i - 1) / sum of distances from i.

    n_i is the size of i's connected component, so scores stay meaningful on
    disconnected graphs (immunized grids routinely split). Isolated nodes
    score 0; a node adjacent to all others of its component scores 1.
    """
    c = nx.closeness_centrality(to_networkx(g), wf_improved=False)
    return Ranking.from_scores(Strategy.CLOSENESS, [c[i] for i in range(g.n)])


def betweenness_ranking(g: Graph) -> Ranking:
    """Rank by shortest-path betweenness over unordered pairs.

    score(i) = sum over pairs s < t (both != i) of the fraction of s-t
    shortest paths passing through i, via Brandes accumulation.
    """
    b = nx.betweenness_centrality(to_networkx(g), normalized=False)
    return Ranking.from_scores(Strategy.BETWEENNESS, [b[i] for i in range(g.n)])

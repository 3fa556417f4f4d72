"""Single dispatch point mapping a Strategy to its ranking computation."""

from __future__ import annotations

from .centrality import betweenness_ranking, closeness_ranking
from .epidemic import RateModel, SimulationProtocol, most_infected_ranking
from .graph import Graph, Ranking, Strategy, degree_ranking, kcore_ranking
from .spectral import (
    DEFAULT_POWER,
    av11_ranking,
    dynamical_importance_ranking,
    estrada_ranking,
)


def compute_ranking(strategy: Strategy | str, g: Graph, *,
                    power: int = DEFAULT_POWER,
                    rates: RateModel | None = None,
                    protocol: SimulationProtocol | None = None) -> Ranking:
    """Compute a full node ranking for any implemented strategy.

    ``most-infected`` is the only strategy that needs rates and a simulation
    protocol; the rest are pure functions of the graph (AV11 also takes the
    matrix power).
    """
    strategy = Strategy(strategy)
    if strategy is Strategy.AV11:
        return av11_ranking(g, power=power)
    if strategy is Strategy.DEGREE:
        return degree_ranking(g)
    if strategy is Strategy.CLOSENESS:
        return closeness_ranking(g)
    if strategy is Strategy.BETWEENNESS:
        return betweenness_ranking(g)
    if strategy is Strategy.DYNAMICAL_IMPORTANCE:
        return dynamical_importance_ranking(g)
    if strategy is Strategy.ESTRADA_INDEX:
        return estrada_ranking(g)
    if strategy is Strategy.KCORE:
        return kcore_ranking(g)
    if strategy is Strategy.MOST_INFECTED:
        if rates is None or protocol is None:
            raise ValueError("most-infected ranking needs a rate model and a protocol")
        return most_infected_ranking(g, rates, protocol)
    raise ValueError(f"unhandled strategy {strategy!r}")

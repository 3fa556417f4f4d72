"""netimmune: budgeted node immunization and SIS spreading analysis on networks."""

from ._version import __version__
from .centrality import betweenness_ranking, closeness_ranking
from .epidemic import (
    ModifiedMatrix,
    RateModel,
    SimulationOutcome,
    SimulationProtocol,
    build_rates,
    exact_probability_iteration,
    linear_iteration,
    modified_matrix,
    most_infected_ranking,
    scale_rates_to_threshold,
    simulate_sis,
    threshold_lambda,
)
from .graph import (
    DEFAULT_COMPARISON_STRATEGIES,
    BudgetSpec,
    Graph,
    GraphFormat,
    GraphFormatError,
    Ranking,
    Strategy,
    core_numbers,
    degree_ranking,
    ieee118_graph,
    kcore_ranking,
    load_graph,
    load_graph_path,
    serialize_graph,
)
from .harness import ComparisonTable, ExperimentConfig, run_compare
from .oracle import CombinationGuardError, GapReport, gap_report, optimal_removal
from .spectral import (
    DEFAULT_POWER,
    Spectrum,
    av11_ranking,
    av11_select,
    diagonal_shift,
    dynamical_importance_ranking,
    estrada_ranking,
    masked_adjacency,
    separation_lower_bound,
    spectrum,
    trace_power_bound,
)
from .strategies import compute_ranking

__all__ = [
    "__version__",
    "BudgetSpec",
    "CombinationGuardError",
    "ComparisonTable",
    "DEFAULT_COMPARISON_STRATEGIES",
    "DEFAULT_POWER",
    "ExperimentConfig",
    "GapReport",
    "Graph",
    "GraphFormat",
    "GraphFormatError",
    "ModifiedMatrix",
    "Ranking",
    "RateModel",
    "SimulationOutcome",
    "SimulationProtocol",
    "Spectrum",
    "Strategy",
    "av11_ranking",
    "av11_select",
    "betweenness_ranking",
    "build_rates",
    "closeness_ranking",
    "compute_ranking",
    "core_numbers",
    "degree_ranking",
    "diagonal_shift",
    "dynamical_importance_ranking",
    "estrada_ranking",
    "exact_probability_iteration",
    "gap_report",
    "ieee118_graph",
    "kcore_ranking",
    "linear_iteration",
    "load_graph",
    "load_graph_path",
    "masked_adjacency",
    "modified_matrix",
    "most_infected_ranking",
    "optimal_removal",
    "run_compare",
    "scale_rates_to_threshold",
    "separation_lower_bound",
    "serialize_graph",
    "simulate_sis",
    "spectrum",
    "threshold_lambda",
    "trace_power_bound",
]

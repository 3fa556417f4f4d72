"""Comparison-protocol harness: config, paired simulation runs, table output.

For each strategy the top-k ranked nodes (skipping infection seeds) are
immunized and the same Monte-Carlo trials are replayed under common random
numbers, so differences between rows reflect the immunization sets rather
than sampling noise.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO

import numpy as np

from ._version import __version__
from .epidemic import SimulationProtocol, build_rates, simulate_sis
from .graph import (
    DEFAULT_COMPARISON_STRATEGIES,
    BudgetSpec,
    Graph,
    Strategy,
    ieee118_graph,
    load_graph_path,
)
from .strategies import compute_ranking

# Spawn-key prefixes for drawing the rate model / default seed set out of
# the master seed without touching the trial streams.
_RATE_STREAM = 7919
_SEED_STREAM = 5077


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully describes one comparison run; JSON round-trips losslessly."""

    graph: str
    budget: BudgetSpec
    seeds: tuple[int, ...] | None = None
    graph_format: str | None = None
    relabel: bool = False
    strategies: tuple[Strategy, ...] = DEFAULT_COMPARISON_STRATEGIES
    beta_range: tuple[float, float] = (0.1, 0.4)
    delta_range: tuple[float, float] = (0.2, 0.5)
    steps: int = 200
    trials: int = 200
    master_seed: int = 42
    power: int = 16
    calibration_trials: int = 100
    output_csv: str | None = None
    output_json: str | None = None

    def to_json_obj(self) -> dict:
        budget = ({"count": self.budget.count} if self.budget.count is not None
                  else {"fraction": self.budget.fraction})
        return {
            "graph": self.graph,
            "graph_format": self.graph_format,
            "relabel": self.relabel,
            "budget": budget,
            "seeds": list(self.seeds) if self.seeds is not None else None,
            "strategies": [s.value for s in self.strategies],
            "beta_range": list(self.beta_range),
            "delta_range": list(self.delta_range),
            "steps": self.steps,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "power": self.power,
            "calibration_trials": self.calibration_trials,
            "output_csv": self.output_csv,
            "output_json": self.output_json,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExperimentConfig":
        budget = obj["budget"]
        if isinstance(budget, str):
            spec = BudgetSpec.parse(budget)
        elif "count" in budget and budget["count"] is not None:
            spec = BudgetSpec.from_count(int(budget["count"]))
        else:
            spec = BudgetSpec.from_fraction(float(budget["fraction"]))
        kwargs = {
            "graph": obj["graph"],
            "budget": spec,
            "seeds": tuple(obj["seeds"]) if obj.get("seeds") is not None else None,
            "graph_format": obj.get("graph_format"),
            "relabel": bool(obj.get("relabel", False)),
            "beta_range": tuple(obj.get("beta_range", (0.1, 0.4))),
            "delta_range": tuple(obj.get("delta_range", (0.2, 0.5))),
            "steps": int(obj.get("steps", 200)),
            "trials": int(obj.get("trials", 200)),
            "master_seed": int(obj.get("master_seed", 42)),
            "power": int(obj.get("power", 16)),
            "calibration_trials": int(obj.get("calibration_trials", 100)),
            "output_csv": obj.get("output_csv"),
            "output_json": obj.get("output_json"),
        }
        if obj.get("strategies") is not None:
            kwargs["strategies"] = tuple(Strategy(s) for s in obj["strategies"])
        return cls(**kwargs)

    def config_sha256(self) -> str:
        """Digest of the experimental parameters (output paths excluded)."""
        obj = self.to_json_obj()
        obj.pop("output_csv", None)
        obj.pop("output_json", None)
        canonical = json.dumps(obj, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_config(path) -> ExperimentConfig:
    return ExperimentConfig.from_json_obj(json.loads(Path(path).read_text(encoding="utf-8")))


def resolve_graph(config: ExperimentConfig) -> Graph:
    if config.graph == "ieee118":
        return ieee118_graph()
    return load_graph_path(config.graph, config.graph_format, relabel=config.relabel)


def default_seeds(g: Graph, master_seed: int, count: int | None = None) -> tuple[int, ...]:
    """Default infection sources: ~5% of nodes drawn deterministically.

    Cascades are initiated from several points spread over the network; a
    single source makes the comparison degenerate (any ranking that happens
    to cover that one neighborhood quarantines the infection outright).
    """
    if count is None:
        count = max(1, round(0.05 * g.n))
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(_SEED_STREAM,)))
    return tuple(sorted(int(x) for x in rng.choice(g.n, size=count, replace=False)))


@dataclass(frozen=True)
class StrategyResult:
    strategy: Strategy
    immunized: tuple[int, ...]
    mean_final_infected: float
    std_final_infected: float
    pct_of_n: float
    rank: int
    final_counts: tuple[int, ...]
    mean_trajectory: tuple[float, ...]


@dataclass(frozen=True)
class ComparisonTable:
    """Per-strategy aggregate rows, sorted ascending by mean final infected."""

    rows: tuple[StrategyResult, ...]
    config: ExperimentConfig
    n: int
    budget_k: int

    def row(self, strategy: Strategy | str) -> StrategyResult:
        strategy = Strategy(strategy)
        for r in self.rows:
            if r.strategy is strategy:
                return r
        raise KeyError(strategy)


def immunization_set(order, k: int, seeds) -> list[int]:
    """First k ranked nodes, skipping infection seeds."""
    seed_set = set(seeds)
    chosen = []
    for node in order:
        if node in seed_set:
            continue
        chosen.append(node)
        if len(chosen) == k:
            break
    if len(chosen) < k:
        raise ValueError(f"ranking exhausted before {k} non-seed nodes were found")
    return chosen


def rate_seed_for(master_seed: int) -> int:
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(_RATE_STREAM,))
    return int(ss.generate_state(1)[0])


def run_compare(config: ExperimentConfig) -> ComparisonTable:
    """Execute the full comparison protocol for every configured strategy."""
    g = resolve_graph(config)
    k = config.budget.resolve(g.n)
    if k >= g.n:
        raise ValueError(f"budget {k} must be smaller than the node count {g.n}")
    seeds = config.seeds if config.seeds is not None else default_seeds(g, config.master_seed)
    if len(seeds) == 0:
        raise ValueError("seed set must not be empty")
    if k > g.n - len(set(seeds)):
        raise ValueError(f"budget {k} exceeds the {g.n - len(set(seeds))} non-seed nodes")
    resolved = replace(config, seeds=tuple(seeds))

    rates = build_rates(g, config.beta_range, config.delta_range,
                        rate_seed_for(config.master_seed))
    # Rotating-seed calibration: most-infected scores generic spreading
    # propensity, not familiarity with this run's particular seed set.
    protocol = SimulationProtocol(seeds=None, steps=config.steps,
                                  trials=config.calibration_trials,
                                  master_seed=config.master_seed)

    raw_rows = []
    for strategy in config.strategies:
        ranking = compute_ranking(strategy, g, power=config.power,
                                  rates=rates, protocol=protocol)
        immunized = immunization_set(ranking.order, k, seeds)
        outcomes = simulate_sis(g, rates, seeds, immunized, config.steps,
                                config.trials, config.master_seed)
        finals = np.array([o.infected_counts[-1] for o in outcomes])
        counts = np.array([o.infected_counts for o in outcomes], dtype=float)
        raw_rows.append((strategy, immunized, finals, counts.mean(axis=0)))

    raw_rows.sort(key=lambda r: (float(np.mean(r[2])), r[0].value))
    rows = []
    for pos, (strategy, immunized, finals, traj) in enumerate(raw_rows, start=1):
        mean = float(np.mean(finals))
        rows.append(StrategyResult(
            strategy=strategy,
            immunized=tuple(immunized),
            mean_final_infected=mean,
            std_final_infected=float(np.std(finals)),
            pct_of_n=100.0 * mean / g.n,
            rank=pos,
            final_counts=tuple(int(x) for x in finals),
            mean_trajectory=tuple(float(x) for x in traj),
        ))
    return ComparisonTable(rows=tuple(rows), config=resolved, n=g.n, budget_k=k)


# ---------------------------------------------------------------------------
# Output writers
# ---------------------------------------------------------------------------

def write_table_csv(table: ComparisonTable, out: IO[str]) -> None:
    out.write(f"# netimmune {__version__}\n")
    out.write(f"# config_sha256 {table.config.config_sha256()}\n")
    out.write("rank,strategy,mean_final_infected,std_final_infected,pct_of_n,immunized\n")
    for r in table.rows:
        immunized = " ".join(map(str, r.immunized))
        out.write(f"{r.rank},{r.strategy.value},{r.mean_final_infected!r},"
                  f"{r.std_final_infected!r},{r.pct_of_n!r},{immunized}\n")


def table_json_obj(table: ComparisonTable) -> dict:
    return {
        "version": __version__,
        "config_sha256": table.config.config_sha256(),
        "config": table.config.to_json_obj(),
        "n": table.n,
        "budget_k": table.budget_k,
        "rows": [
            {
                "rank": r.rank,
                "strategy": r.strategy.value,
                "immunized": list(r.immunized),
                "mean_final_infected": r.mean_final_infected,
                "std_final_infected": r.std_final_infected,
                "pct_of_n": r.pct_of_n,
                "final_counts": list(r.final_counts),
                "mean_trajectory": list(r.mean_trajectory),
            }
            for r in table.rows
        ],
    }


def write_outputs(table: ComparisonTable) -> list[str]:
    """Write the configured CSV/JSON outputs; returns the paths written."""
    written = []
    cfg = table.config
    if cfg.output_csv:
        with open(cfg.output_csv, "w", encoding="utf-8", newline="") as f:
            write_table_csv(table, f)
        written.append(cfg.output_csv)
    if cfg.output_json:
        with open(cfg.output_json, "w", encoding="utf-8") as f:
            json.dump(table_json_obj(table), f, indent=2)
            f.write("\n")
        written.append(cfg.output_json)
    return written

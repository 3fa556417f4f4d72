"""Command-line front end: rank, compare, threshold, simulate, oracle.

Exit codes: 0 success, 2 usage errors (argparse), 3 validation or guard
failures (bad ranges, budget too large, enumeration guard, parse errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from ._version import __version__
from .epidemic import (
    SimulationProtocol,
    build_rates,
    modified_matrix,
    simulate_sis,
    threshold_lambda,
)
from .graph import (
    BudgetSpec,
    Graph,
    GraphFormatError,
    Strategy,
    ieee118_graph,
    load_graph_path,
)
from .harness import (
    ExperimentConfig,
    default_seeds,
    load_config,
    rate_seed_for,
    run_compare,
    write_outputs,
)
from .oracle import gap_report, optimal_removal, write_enumeration_csv
from .spectral import DEFAULT_POWER, spectrum
from .strategies import compute_ranking

_STRATEGY_NAMES = [s.value for s in Strategy]


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True,
                   help='graph file path, or "ieee118" for the bundled IEEE 118-bus case')
    p.add_argument("--fmt", choices=["edgelist", "json"], default=None,
                   help="graph format (default: inferred from suffix)")
    p.add_argument("--relabel", action="store_true",
                   help="remap non-contiguous integer ids to 0..n-1")


def _load_graph(args) -> Graph:
    if args.graph == "ieee118":
        return ieee118_graph()
    return load_graph_path(args.graph, args.fmt, relabel=args.relabel)


def _add_rate_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta-range", nargs=2, type=float, default=[0.1, 0.4],
                   metavar=("LO", "HI"), help="uniform range for infection rates")
    p.add_argument("--delta-range", nargs=2, type=float, default=[0.2, 0.5],
                   metavar=("LO", "HI"), help="uniform range for cure rates")
    p.add_argument("--seed", type=int, default=42, help="master RNG seed")


def cmd_rank(args) -> int:
    g = _load_graph(args)
    rates = protocol = None
    if Strategy(args.strategy) is Strategy.MOST_INFECTED:
        rates = build_rates(g, args.beta_range, args.delta_range, rate_seed_for(args.seed))
        seeds = tuple(args.seeds) if args.seeds else None
        protocol = SimulationProtocol(seeds=seeds, steps=args.steps,
                                      trials=args.trials, master_seed=args.seed)
    ranking = compute_ranking(args.strategy, g, power=args.power,
                              rates=rates, protocol=protocol)
    if args.format == "json":
        text = json.dumps(ranking.to_json_obj(), indent=2) + "\n"
    elif args.format == "csv":
        lines = ["node,score"]
        lines += [f"{node},{ranking.scores[node]:g}" for node in ranking.order]
        text = "\n".join(lines) + "\n"
    else:
        text = "".join(f"{node} {ranking.scores[node]:g}\n" for node in ranking.order)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    if args.config:
        config = load_config(args.config)
    else:
        config = ExperimentConfig(graph=args.graph, budget=BudgetSpec.parse("16%"))
    overrides = {}
    if args.graph is not None:
        overrides["graph"] = args.graph
    if args.fmt is not None:
        overrides["graph_format"] = args.fmt
    if args.relabel:
        overrides["relabel"] = True
    if args.budget is not None:
        overrides["budget"] = BudgetSpec.parse(args.budget)
    if args.strategies is not None:
        overrides["strategies"] = tuple(Strategy(s) for s in args.strategies)
    if args.beta_range is not None:
        overrides["beta_range"] = tuple(args.beta_range)
    if args.delta_range is not None:
        overrides["delta_range"] = tuple(args.delta_range)
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.power is not None:
        overrides["power"] = args.power
    if args.seeds is not None:
        overrides["seeds"] = tuple(args.seeds)
    if args.output_csv is not None:
        overrides["output_csv"] = args.output_csv
    if args.output_json is not None:
        overrides["output_json"] = args.output_json
    config = replace(config, **overrides)
    if config.graph is None:
        raise ValueError("no graph given (use --graph or a config file)")

    table = run_compare(config)
    print(f"n = {table.n}, budget k = {table.budget_k}, "
          f"trials = {config.trials}, steps = {config.steps}")
    print(f"{'rank':>4}  {'strategy':<22}{'mean':>10}{'std':>10}{'pct':>9}")
    for r in table.rows:
        print(f"{r.rank:>4}  {r.strategy.value:<22}{r.mean_final_infected:>10.3f}"
              f"{r.std_final_infected:>10.3f}{r.pct_of_n:>8.2f}%")
    for path in write_outputs(table):
        print(f"wrote {path}")
    return 0


def cmd_threshold(args) -> int:
    g = _load_graph(args)
    rates = build_rates(g, args.beta_range, args.delta_range, rate_seed_for(args.seed))
    lam_m, spreads = threshold_lambda(modified_matrix(g, rates))
    lam_1 = spectrum(g).lambda_1
    print(f"lambda_M = {lam_m:.6f} ({'above' if spreads else 'below'} threshold)")
    print(f"spreads = {spreads}")
    print(f"lambda_1(A) = {lam_1:.6f}")
    return 0


def cmd_simulate(args) -> int:
    g = _load_graph(args)
    rates = build_rates(g, args.beta_range, args.delta_range, rate_seed_for(args.seed))
    seeds = tuple(args.seeds) if args.seeds else default_seeds(g, args.seed)
    immunized = tuple(args.immunized or ())
    outcomes = simulate_sis(g, rates, seeds, immunized, args.steps, args.trials, args.seed)
    finals = np.array([o.infected_counts[-1] for o in outcomes])
    print(f"trials = {len(outcomes)}, steps = {args.steps}, "
          f"seeds = {sorted(seeds)}, immunized = {sorted(immunized)}")
    print(f"mean final infected = {finals.mean():.3f} "
          f"({100.0 * finals.mean() / g.n:.2f}% of n = {g.n})")
    if args.output:
        payload = {
            "version": __version__,
            "graph": args.graph,
            "rates": rates.to_json_obj(),
            "outcomes": [o.to_json_obj() for o in outcomes],
        }
        with open(args.output, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
        print(f"wrote {args.output}")
    return 0


def cmd_oracle(args) -> int:
    g = _load_graph(args)
    report = gap_report(g, args.k, power=args.power)
    print(f"separation floor lambda_{args.k + 1} = {report.floor_raw:.6f} "
          f"(clamped {report.floor_clamped:.6f})")
    print(f"optimal residual lambda_1 = {report.optimal_lambda1:.6f} "
          f"set = {list(report.optimal_set)}")
    print(f"av11 residual lambda_1 = {report.av11_lambda1:.6f} "
          f"set = {list(report.av11_set)}")
    if args.table:
        _, _, table = optimal_removal(g, args.k, keep_table=True)
        with open(args.table, "w", encoding="utf-8", newline="") as f:
            write_enumeration_csv(table, f)
        print(f"wrote {args.table}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netimmune",
        description="Budgeted node immunization and SIS spreading analysis")
    parser.add_argument("--version", action="version", version=f"netimmune {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank nodes by one strategy")
    _add_graph_args(p)
    p.add_argument("--strategy", required=True, choices=_STRATEGY_NAMES)
    p.add_argument("--power", type=int, default=DEFAULT_POWER)
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.add_argument("--output", default=None, help="write instead of stdout")
    _add_rate_args(p)
    p.add_argument("--seeds", nargs="+", type=int, default=None,
                   help="initial infected nodes (most-infected calibration)")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("compare", help="run the full immunization comparison protocol")
    p.add_argument("--config", default=None, help="JSON experiment config")
    p.add_argument("--graph", default=None,
                   help='graph file path or "ieee118" (overrides config)')
    p.add_argument("--fmt", choices=["edgelist", "json"], default=None)
    p.add_argument("--relabel", action="store_true")
    p.add_argument("--budget", default=None, help='nodes to immunize: "19", "16%%" or "0.16"')
    p.add_argument("--strategies", nargs="+", choices=_STRATEGY_NAMES, default=None)
    p.add_argument("--beta-range", nargs=2, type=float, default=None, metavar=("LO", "HI"))
    p.add_argument("--delta-range", nargs=2, type=float, default=None, metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="master RNG seed")
    p.add_argument("--power", type=int, default=None)
    p.add_argument("--seeds", nargs="+", type=int, default=None,
                   help="initial infected nodes (excluded from immunization)")
    p.add_argument("--output-csv", default=None)
    p.add_argument("--output-json", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("threshold", help="spectral threshold diagnostic")
    _add_graph_args(p)
    _add_rate_args(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("simulate", help="Monte-Carlo SIS under a fixed immunization set")
    _add_graph_args(p)
    _add_rate_args(p)
    p.add_argument("--seeds", nargs="+", type=int, default=None,
                   help="initial infected nodes (default: max-degree node)")
    p.add_argument("--immunized", nargs="+", type=int, default=None)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--output", default=None, help="write full traces as JSON")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="exhaustive optimal removal vs the greedy selection")
    _add_graph_args(p)
    p.add_argument("-k", type=int, required=True, help="number of nodes to remove")
    p.add_argument("--power", type=int, default=DEFAULT_POWER)
    p.add_argument("--table", default=None, help="write the full enumeration table as CSV")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, GraphFormatError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

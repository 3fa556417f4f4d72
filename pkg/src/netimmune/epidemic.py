"""Heterogeneous-rate SIS spreading: modified matrix, threshold, iterations, Monte Carlo.

Rates follow the receiver-first convention throughout: beta[(i, j)] is the
per-step probability that infected node j infects susceptible neighbor i,
matching the coupling m_ij = beta_ij of the infection-probability recursion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, Ranking, Strategy

# Spawn-key prefix separating calibration draws from comparison trials.
_CALIBRATION_STREAM = 104729


@dataclass(frozen=True)
class RateModel:
    """Per-edge infection rates and per-node cure rates, plus their generator spec.

    ``beta`` maps each directed pair (receiver, source) whose unordered pair
    is a graph edge; the two directions may differ. Ranges and seed are kept
    so the model can be regenerated bit-identically.
    """

    beta: dict[tuple[int, int], float]
    delta: dict[int, float]
    beta_range: tuple[float, float] | None = None
    delta_range: tuple[float, float] | None = None
    seed: int | None = None

    def to_json_obj(self) -> dict:
        return {
            "beta": [[i, j, v] for (i, j), v in sorted(self.beta.items())],
            "delta": [[i, v] for i, v in sorted(self.delta.items())],
            "beta_range": list(self.beta_range) if self.beta_range else None,
            "delta_range": list(self.delta_range) if self.delta_range else None,
            "seed": self.seed,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RateModel":
        return cls(
            beta={(int(i), int(j)): float(v) for i, j, v in obj["beta"]},
            delta={int(i): float(v) for i, v in obj["delta"]},
            beta_range=tuple(obj["beta_range"]) if obj.get("beta_range") else None,
            delta_range=tuple(obj["delta_range"]) if obj.get("delta_range") else None,
            seed=obj.get("seed"),
        )


@dataclass(frozen=True)
class ModifiedMatrix:
    """Dense spreading matrix: beta off-diagonal on graph edges, 1 - delta on the diagonal."""

    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("modified matrix must be square")
        if (m < 0).any() or (m > 1).any():
            raise ValueError("modified-matrix entries must lie in [0, 1]")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _check_range(name: str, rng: Sequence[float]) -> tuple[float, float]:
    lo, hi = float(rng[0]), float(rng[1])
    if not (0.0 <= lo <= hi <= 1.0):
        raise ValueError(f"{name} range must satisfy 0 <= lo <= hi <= 1, got ({lo}, {hi})")
    return lo, hi


def build_rates(g: Graph, beta_range: Sequence[float], delta_range: Sequence[float],
                seed: int) -> RateModel:
    """Draw one beta per directed edge and one delta per node, uniform on the ranges.

    Deterministic given (graph, ranges, seed): edges are visited in canonical
    sorted order, receiver-first direction drawn before the reverse.
    """
    blo, bhi = _check_range("beta", beta_range)
    dlo, dhi = _check_range("delta", delta_range)
    rng = np.random.default_rng(seed)
    beta: dict[tuple[int, int], float] = {}
    for u, v in sorted(g.edges):
        beta[(u, v)] = float(rng.uniform(blo, bhi))
        beta[(v, u)] = float(rng.uniform(blo, bhi))
    delta = {i: float(rng.uniform(dlo, dhi)) for i in range(g.n)}
    return RateModel(beta=beta, delta=delta, beta_range=(blo, bhi),
                     delta_range=(dlo, dhi), seed=seed)


def _validate_rates(g: Graph, r: RateModel) -> None:
    expected = set()
    for u, v in g.edges:
        expected.add((u, v))
        expected.add((v, u))
    if set(r.beta) != expected:
        raise ValueError("rate model beta keys do not match the graph's directed edges")
    if set(r.delta) != set(range(g.n)):
        raise ValueError("rate model delta keys do not match the graph's nodes")
    if any(not 0.0 <= v <= 1.0 for v in r.beta.values()):
        raise ValueError("beta rates must lie in [0, 1]")
    if any(not 0.0 <= v <= 1.0 for v in r.delta.values()):
        raise ValueError("delta rates must lie in [0, 1]")


def modified_matrix(g: Graph, r: RateModel) -> ModifiedMatrix:
    """m_ij = beta_ij on edges, 0 elsewhere off-diagonal, 1 - delta_i on the diagonal."""
    _validate_rates(g, r)
    m = np.zeros((g.n, g.n))
    for (i, j), v in r.beta.items():
        m[i, j] = v
    for i, v in r.delta.items():
        m[i, i] = 1.0 - v
    return ModifiedMatrix(matrix=m)


def threshold_lambda(m: ModifiedMatrix) -> tuple[float, bool]:
    """Spectral threshold diagnostic: (lambda_M, spreads flag).

    lambda_M is the largest-modulus eigenvalue (real, the matrix being
    non-negative); spreading can only be sustained when it is >= 1. This is
    a diagnostic, never a gate inside the simulator: below 1 the infection
    provably dies out, above 1 nothing quantitative is implied.
    """
    lam = np.linalg.eigvals(m.matrix)
    lam_m = float(np.max(np.abs(lam)))
    return lam_m, lam_m >= 1.0


def _check_p0(m: ModifiedMatrix, p0: Sequence[float]) -> np.ndarray:
    p = np.asarray(p0, dtype=float)
    if p.shape != (m.n,):
        raise ValueError(f"p0 must have shape ({m.n},)")
    if (p < 0).any() or (p > 1).any():
        raise ValueError("p0 entries must lie in [0, 1]")
    return p


def linear_iteration(m: ModifiedMatrix, p0: Sequence[float], steps: int) -> np.ndarray:
    """Linearized probability iteration P(t) = M P(t-1); row t of the result is P(t)."""
    p = _check_p0(m, p0)
    traj = np.empty((steps + 1, m.n))
    traj[0] = p
    for t in range(1, steps + 1):
        p = m.matrix @ p
        traj[t] = p
    return traj


def exact_probability_iteration(m: ModifiedMatrix, p0: Sequence[float],
                                steps: int) -> np.ndarray:
    """Nonlinear infection-probability recursion.

    p_i(t) = 1 - prod_k (1 - m_ik p_k(t-1)), the product running over all k
    with m_ik > 0 including k = i (own persistence through m_ii = 1 -
    delta_i). Entries where m_ik = 0 contribute factor 1, so the full
    product is taken. Outputs stay in [0, 1] and are dominated elementwise
    by the linear iteration from the same p0.
    """
    p = _check_p0(m, p0)
    traj = np.empty((steps + 1, m.n))
    traj[0] = p
    for t in range(1, steps + 1):
        p = 1.0 - np.prod(1.0 - m.matrix * p[np.newaxis, :], axis=1)
        traj[t] = p
    return traj


# ---------------------------------------------------------------------------
# Monte-Carlo SIS
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimulationOutcome:
    """One trial's infection trace under a fixed immunization set."""

    infected_counts: tuple[int, ...]
    final_infected: tuple[int, ...]
    trial_index: int
    trial_seed: int
    params: dict = field(repr=False)

    def to_json_obj(self) -> dict:
        return {
            "infected_counts": list(self.infected_counts),
            "final_infected": list(self.final_infected),
            "trial_index": self.trial_index,
            "trial_seed": self.trial_seed,
            "params": self.params,
        }


@dataclass(frozen=True)
class SimulationProtocol:
    """Parameters of the no-immunization calibration run behind most-infected.

    ``seeds=None`` rotates the seed across trials (trial t starts at node
    t mod n), scoring how often nodes catch infections started anywhere
    rather than from one fixed source set.
    """

    seeds: tuple[int, ...] | None = None
    steps: int = 100
    trials: int = 100
    master_seed: int = 0


def _trial_seed_sequence(master_seed: int, trial: int,
                         stream: tuple[int, ...] = ()) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=master_seed, spawn_key=stream + (trial,))


def _log_survival_matrix(g: Graph, r: RateModel) -> np.ndarray:
    """L[v, k] = log(1 - beta_vk); matmul with an infection indicator gives
    log of the per-node escape probability. Certain infection (beta = 1)
    maps to a large negative finite value so the sum still underflows to
    exactly 0 under exp."""
    b = np.zeros((g.n, g.n))
    for (i, j), v in r.beta.items():
        b[i, j] = v
    with np.errstate(divide="ignore"):
        log_s = np.log1p(-b)
    log_s[np.isneginf(log_s)] = -800.0
    return log_s


def _sis_trial(log_s: np.ndarray, delta: np.ndarray, seed_mask: np.ndarray,
               immune_mask: np.ndarray, steps: int,
               rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Synchronous SIS trial; returns (per-step counts, final mask, per-node infected-step tally).

    Within a step: recoveries are decided on the pre-step infected set, then
    every pre-step infected node transmits; post-recovery susceptibles
    (including nodes that just recovered) can be (re)infected, so a node
    infected and recovered in the same step resolves as infected. Draw
    counts are state-independent (2n uniforms per step) so paired runs with
    different immunization sets consume identical streams.
    """
    n = len(delta)
    infected = seed_mask.copy()
    counts = np.empty(steps + 1, dtype=int)
    counts[0] = int(infected.sum())
    node_steps = infected.astype(int)
    for t in range(1, steps + 1):
        u_rec = rng.random(n)
        u_inf = rng.random(n)
        survivors = infected & (u_rec >= delta)
        log_escape = log_s @ infected.astype(float)
        p_infect = -np.expm1(log_escape)
        newly = ~survivors & ~immune_mask & (u_inf < p_infect)
        infected = survivors | newly
        counts[t] = int(infected.sum())
        node_steps += infected
    return counts, infected, node_steps


def _masks(n: int, seeds: Iterable[int], immunized: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    seed_set, immune_set = set(seeds), set(immunized)
    for name, s in (("seed", seed_set), ("immunized", immune_set)):
        for i in s:
            if not 0 <= i < n:
                raise ValueError(f"{name} node {i} out of range for n={n}")
    overlap = seed_set & immune_set
    if overlap:
        raise ValueError(f"seed nodes {sorted(overlap)} cannot be immunized")
    seed_mask = np.zeros(n, dtype=bool)
    seed_mask[sorted(seed_set)] = True
    immune_mask = np.zeros(n, dtype=bool)
    immune_mask[sorted(immune_set)] = True
    return seed_mask, immune_mask


def simulate_sis(g: Graph, r: RateModel, seeds: Iterable[int], immunized: Iterable[int],
                 steps: int, trials: int, master_seed: int) -> list[SimulationOutcome]:
    """Monte-Carlo SIS with immunized nodes removed from transmission entirely.

    Trials are independent: trial t draws from a generator seeded by
    (master_seed, t), so results are identical whether trials run serially
    or concurrently, and two simulations sharing a master seed are paired
    trial by trial (common random numbers).
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    _validate_rates(g, r)
    seeds = sorted(set(seeds))
    immunized = sorted(set(immunized))
    seed_mask, immune_mask = _masks(g.n, seeds, immunized)
    log_s = _log_survival_matrix(g, r)
    delta = np.array([r.delta[i] for i in range(g.n)])
    params = {
        "steps": steps,
        "trials": trials,
        "seeds": seeds,
        "immunized": immunized,
        "master_seed": master_seed,
    }
    outcomes = []
    for trial in range(trials):
        ss = _trial_seed_sequence(master_seed, trial)
        rng = np.random.default_rng(ss)
        counts, final_mask, _ = _sis_trial(log_s, delta, seed_mask, immune_mask, steps, rng)
        outcomes.append(SimulationOutcome(
            infected_counts=tuple(int(c) for c in counts),
            final_infected=tuple(int(i) for i in np.nonzero(final_mask)[0]),
            trial_index=trial,
            trial_seed=int(ss.generate_state(1)[0]),
            params=params,
        ))
    return outcomes


def most_infected_ranking(g: Graph, r: RateModel,
                          protocol: SimulationProtocol = SimulationProtocol()) -> Ranking:
    """Rank by total time-steps spent infected in a no-immunization calibration run.

    Uses a dedicated RNG stream so the calibration never shares draws with
    the comparison trials of the same master seed.
    """
    _validate_rates(g, r)
    log_s = _log_survival_matrix(g, r)
    delta = np.array([r.delta[i] for i in range(g.n)])
    immune_mask = np.zeros(g.n, dtype=bool)
    fixed_mask = None
    if protocol.seeds is not None:
        fixed_mask, _ = _masks(g.n, protocol.seeds, ())
    totals = np.zeros(g.n, dtype=int)
    for trial in range(protocol.trials):
        if fixed_mask is not None:
            seed_mask = fixed_mask
        else:
            seed_mask = np.zeros(g.n, dtype=bool)
            seed_mask[trial % g.n] = True
        ss = _trial_seed_sequence(protocol.master_seed, trial, stream=(_CALIBRATION_STREAM,))
        rng = np.random.default_rng(ss)
        _, _, node_steps = _sis_trial(log_s, delta, seed_mask, immune_mask,
                                      protocol.steps, rng)
        totals += node_steps
    return Ranking.from_scores(Strategy.MOST_INFECTED, totals)


def scale_rates_to_threshold(g: Graph, r: RateModel, target: float,
                             tol: float = 1e-10) -> RateModel:
    """Rescale all betas by a common factor so lambda_M hits ``target``.

    The Perron root grows monotonically with the scale, so bisection
    converges; deltas are untouched. Raises if the target is unreachable
    with every beta kept within [0, 1].
    """
    _validate_rates(g, r)
    if not r.beta:
        raise ValueError("graph has no edges; lambda_M cannot be scaled via beta")
    delta_diag = np.array([1.0 - r.delta[i] for i in range(g.n)])

    def lam(scale: float) -> float:
        m = np.zeros((g.n, g.n))
        for (i, j), v in r.beta.items():
            m[i, j] = v * scale
        np.fill_diagonal(m, delta_diag)
        return float(np.max(np.abs(np.linalg.eigvals(m))))

    if lam(0.0) > target:
        raise ValueError(f"target {target} is below max(1 - delta) = {lam(0.0):.6f}")
    hi = 1.0 / max(r.beta.values())
    if lam(hi) < target:
        raise ValueError(f"target {target} unreachable with beta <= 1 "
                         f"(max lambda_M = {lam(hi):.6f})")
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if lam(mid) < target:
            lo = mid
        else:
            hi = mid
    scale = 0.5 * (lo + hi)
    return RateModel(beta={k: v * scale for k, v in r.beta.items()},
                     delta=dict(r.delta))

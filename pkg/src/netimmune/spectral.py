"""Adjacency-spectrum computations, the AV11 greedy selection, and spectral rankers.

AV11 removes nodes one at a time, always the node with the largest diagonal
entry of (Z A Z + d I)^p, where Z zeroes the rows/columns of already-removed
nodes and d = 1 + |lambda_min(A)|. The shift makes every masked matrix
positive definite, so for even p the p-th root of the trace upper-bounds
d + lambda_1 of the masked matrix: shrinking the large diagonal entries of
the power drives the top eigenvalue down.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import BudgetSpec, Graph, Ranking, Strategy

# Even power of the trace surrogate. Larger p tracks lambda_1 more tightly
# (the l_p norm of the shifted spectrum falls toward its max entry); 64 keeps
# hub-heavy graphs sharp while staying far from float overflow at desk scales.
DEFAULT_POWER = 64


@dataclass(frozen=True)
class Spectrum:
    """Full real spectrum of a symmetric matrix, eigenvalues descending.

    ``vectors`` (optional) holds orthonormal eigenvectors as columns aligned
    with ``values``.
    """

    values: np.ndarray
    vectors: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def lambda_1(self) -> float:
        return float(self.values[0])

    @property
    def lambda_min(self) -> float:
        return float(self.values[-1])


def spectrum(g: Graph, want_vectors: bool = False) -> Spectrum:
    """Full symmetric eigendecomposition of the adjacency matrix."""
    a = g.adjacency_matrix()
    if want_vectors:
        w, v = np.linalg.eigh(a)
        return Spectrum(values=w[::-1].copy(), vectors=v[:, ::-1].copy())
    w = np.linalg.eigvalsh(a)
    return Spectrum(values=w[::-1].copy())


def diagonal_shift(g: Graph) -> float:
    """The shift d = 1 + |lambda_min(A)| that makes masked matrices positive definite."""
    w = np.linalg.eigvalsh(g.adjacency_matrix())
    return 1.0 + abs(float(w[0]))


def masked_adjacency(g: Graph, removed: Iterable[int]) -> np.ndarray:
    """Adjacency matrix with the rows and columns of ``removed`` zeroed (Z A Z)."""
    a = g.adjacency_matrix().copy()
    idx = list(removed)
    for i in idx:
        if not 0 <= i < g.n:
            raise ValueError(f"node {i} out of range for n={g.n}")
    a[idx, :] = 0.0
    a[:, idx] = 0.0
    return a


def _lambda_1(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(matrix)[-1])


def _check_power(p: int) -> None:
    if not isinstance(p, int) or p <= 0 or p % 2 != 0:
        raise ValueError(f"power must be a positive even integer, got {p!r}")


def _argmax_lowest_id(values: np.ndarray, active: np.ndarray) -> int:
    # Symmetric nodes produce diagonal entries equal up to round-off; a
    # relative tolerance keeps the id tie-break deterministic.
    vmax = values[active].max()
    tol = 1e-9 * max(1.0, abs(vmax))
    candidates = np.nonzero(active & (values >= vmax - tol))[0]
    return int(candidates[0])


def av11_select(g: Graph, budget: BudgetSpec | int,
                power: int = DEFAULT_POWER) -> tuple[list[int], float]:
    """Greedy spectral budget selection.

    Returns the ordered removal list S (|S| = k) and lambda_1 of the masked
    adjacency after the last removal. Each iteration recomputes
    P = (Z A Z + d I)^p by repeated squaring and removes the still-active
    node with the largest diagonal entry of P (ties -> lowest id). The
    argmax skips already-removed nodes: their diagonal settles at d^p,
    which would beat live nodes on sparse graphs and stall the selection.
    """
    _check_power(power)
    k = budget.resolve(g.n) if isinstance(budget, BudgetSpec) else int(budget)
    if k < 0 or k > g.n:
        raise ValueError(f"budget {k} not in [0, {g.n}]")
    d = diagonal_shift(g)
    masked = g.adjacency_matrix().copy()
    shift = d * np.eye(g.n)
    active = np.ones(g.n, dtype=bool)
    selected: list[int] = []
    for _ in range(k):
        p_mat = np.linalg.matrix_power(masked + shift, power)
        node = _argmax_lowest_id(np.diagonal(p_mat), active)
        selected.append(node)
        active[node] = False
        masked[node, :] = 0.0
        masked[:, node] = 0.0
    return selected, _lambda_1(masked)


def av11_ranking(g: Graph, power: int = DEFAULT_POWER) -> Ranking:
    """Full AV11 ordering: run the selection with k = n; earlier picks score higher."""
    order, _ = av11_select(g, g.n, power=power)
    scores = [0.0] * g.n
    for pos, node in enumerate(order):
        scores[node] = float(g.n - pos)
    return Ranking(strategy=Strategy.AV11, order=tuple(order), scores=tuple(scores))


def dynamical_importance_ranking(g: Graph) -> Ranking:
    """Rank by the drop of lambda_1 when a single node is removed (exact eigensolves)."""
    lam1 = _lambda_1(g.adjacency_matrix())
    scores = [lam1 - _lambda_1(masked_adjacency(g, [i])) for i in range(g.n)]
    return Ranking.from_scores(Strategy.DYNAMICAL_IMPORTANCE, scores)


def estrada_ranking(g: Graph) -> Ranking:
    """Rank by subgraph centrality: diag(exp(A)) = sum_j u_j(i)^2 exp(lambda_j)."""
    spec = spectrum(g, want_vectors=True)
    scores = (spec.vectors ** 2) @ np.exp(spec.values)
    return Ranking.from_scores(Strategy.ESTRADA_INDEX, scores)


def separation_lower_bound(spec: Spectrum, k: int) -> float:
    """Eigenvalue-interlacing floor for any k-node removal.

    Every order n-k principal submatrix has top eigenvalue >= lambda_{k+1}
    of the full matrix, so no budget-k immunization can push the residual
    lambda_1 below this value.
    """
    if not 0 <= k < spec.n:
        raise ValueError(f"k must be in [0, {spec.n - 1}], got {k}")
    return float(spec.values[k])


def trace_power_bound(g: Graph, mask: Iterable[int],
                      power: int = DEFAULT_POWER) -> tuple[float, float]:
    """The AV11 surrogate objective next to the exact masked lambda_1.

    Returns (trace((Z A Z + d I)^p)^(1/p) - d, lambda_1(Z A Z)). The first
    component always dominates the second; the gap shrinks as p grows.
    """
    _check_power(power)
    d = diagonal_shift(g)
    masked = masked_adjacency(g, mask)
    p_mat = np.linalg.matrix_power(masked + d * np.eye(g.n), power)
    bound = float(np.trace(p_mat)) ** (1.0 / power) - d
    return bound, _lambda_1(masked)

"""Exhaustive reference solver for optimal k-node removal (minimum residual lambda_1).

Budgeted removal is NP-complete, so enumeration is the only exact oracle;
it caps the instance size and exists to measure what the greedy selection
trades away and to cross-check the interlacing floor.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import combinations
from typing import IO

import numpy as np

from .graph import Graph
from .spectral import DEFAULT_POWER, av11_select, separation_lower_bound, spectrum

SUBSET_LIMIT = 10_000_000

# Residuals closer than this are the same removal quality; the earlier
# (lexicographically smaller) subset is kept.
_TIE_TOL = 1e-9


class CombinationGuardError(ValueError):
    """Raised when C(n, k) exceeds the enumeration guard."""

    def __init__(self, n: int, k: int, count: int):
        self.n, self.k, self.count = n, k, count
        super().__init__(
            f"C({n}, {k}) = {count} subsets exceeds the enumeration limit "
            f"{SUBSET_LIMIT}; brute force refused")


def _check_guard(n: int, k: int) -> None:
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    count = math.comb(n, k)
    if count > SUBSET_LIMIT:
        raise CombinationGuardError(n, k, count)


def optimal_removal(g: Graph, k: int, *, keep_table: bool = False,
                    ) -> tuple[tuple[int, ...], float, list[tuple[tuple[int, ...], float]] | None]:
    """Minimum residual lambda_1 over all k-subsets.

    Returns (best subset, its residual lambda_1, enumeration table or None).
    Ties within 1e-9 resolve to the lexicographically smallest subset; the
    table lists every (subset, residual lambda_1) in enumeration order.
    """
    _check_guard(g.n, k)
    a = g.adjacency_matrix()
    best_set: tuple[int, ...] | None = None
    best_lam = math.inf
    table: list[tuple[tuple[int, ...], float]] | None = [] if keep_table else None
    for subset in combinations(range(g.n), k):
        masked = a.copy()
        idx = list(subset)
        masked[idx, :] = 0.0
        masked[:, idx] = 0.0
        lam = float(np.linalg.eigvalsh(masked)[-1])
        if table is not None:
            table.append((subset, lam))
        if lam < best_lam - _TIE_TOL:
            best_lam = lam
            best_set = subset
    return best_set, best_lam, table


@dataclass(frozen=True)
class GapReport:
    """Side-by-side residuals: interlacing floor <= optimal <= greedy."""

    k: int
    power: int
    floor_raw: float
    floor_clamped: float
    optimal_set: tuple[int, ...]
    optimal_lambda1: float
    av11_set: tuple[int, ...]
    av11_lambda1: float

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "power": self.power,
            "floor_raw": self.floor_raw,
            "floor_clamped": self.floor_clamped,
            "optimal_set": list(self.optimal_set),
            "optimal_lambda1": self.optimal_lambda1,
            "av11_set": list(self.av11_set),
            "av11_lambda1": self.av11_lambda1,
        }


def gap_report(g: Graph, k: int, power: int = DEFAULT_POWER) -> GapReport:
    """Quantify the greedy selection against the exhaustive optimum and the floor.

    The interlacing floor lambda_{k+1} bounds the eigenvalue itself and can
    be negative; the clamped value max(floor, 0) is reported alongside since
    the residual lambda_1 of a simple graph is never negative.
    """
    _check_guard(g.n, k)
    best_set, best_lam, _ = optimal_removal(g, k)
    av11_set, av11_lam = av11_select(g, k, power=power)
    floor = separation_lower_bound(spectrum(g), k) if k < g.n else 0.0
    return GapReport(
        k=k,
        power=power,
        floor_raw=floor,
        floor_clamped=max(floor, 0.0),
        optimal_set=best_set,
        optimal_lambda1=best_lam,
        av11_set=tuple(av11_set),
        av11_lambda1=av11_lam,
    )


def write_enumeration_csv(table: list[tuple[tuple[int, ...], float]], out: IO[str]) -> None:
    """Dump an optimal_removal table as CSV rows (subset, residual lambda_1)."""
    writer = csv.writer(out)
    writer.writerow(["subset", "residual_lambda1"])
    for subset, lam in table:
        writer.writerow([" ".join(map(str, subset)), repr(lam)])

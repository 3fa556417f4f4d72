import io
import math
from itertools import combinations

import numpy as np
import pytest

from netimmune import (
    CombinationGuardError,
    Graph,
    av11_select,
    gap_report,
    masked_adjacency,
    optimal_removal,
    separation_lower_bound,
    spectrum,
)
from netimmune.oracle import write_enumeration_csv

from conftest import random_graph


def lam1(matrix):
    return float(np.linalg.eigvalsh(matrix)[-1])


class TestOptimalRemoval:
    def test_c4_antipodal_pair(self, c4):
        best, lam, _ = optimal_removal(c4, 2)
        assert best == (0, 2)  # ties with {1, 3}; lexicographic wins
        assert lam == pytest.approx(0.0, abs=1e-12)

    def test_star_hub(self, star5):
        best, lam, _ = optimal_removal(star5, 1)
        assert best == (0,)
        assert lam == pytest.approx(0.0, abs=1e-12)

    def test_p3_center(self, p3):
        best, lam, _ = optimal_removal(p3, 1)
        assert best == (1,)
        assert lam == pytest.approx(0.0, abs=1e-12)

    def test_k0_noop(self, k4):
        best, lam, _ = optimal_removal(k4, 0)
        assert best == ()
        assert lam == pytest.approx(3.0, abs=1e-12)

    def test_guard_reports_count(self):
        g = random_graph(40, 0.2, 0)
        with pytest.raises(CombinationGuardError) as exc:
            optimal_removal(g, 12)
        assert exc.value.count == math.comb(40, 12)
        assert str(math.comb(40, 12)) in str(exc.value)

    def test_table_covers_all_subsets(self, c4):
        _, _, table = optimal_removal(c4, 2, keep_table=True)
        assert [s for s, _ in table] == list(combinations(range(4), 2))

    def test_table_row_matches_av11_residual(self):
        for seed in range(4):
            g = random_graph(9, 0.35, seed)
            k = 2
            av11_set, av11_lam = av11_select(g, k)
            _, _, table = optimal_removal(g, k, keep_table=True)
            row = dict(table)[tuple(sorted(av11_set))]
            assert row == pytest.approx(av11_lam, abs=1e-9)


class TestGapReport:
    def test_star_av11_is_optimal(self, star5):
        rep = gap_report(star5, 1)
        assert rep.av11_lambda1 == pytest.approx(0.0, abs=1e-12)
        assert rep.optimal_lambda1 == pytest.approx(0.0, abs=1e-12)
        assert rep.floor_raw == pytest.approx(0.0, abs=1e-12)

    def test_k4_negative_floor_clamped(self, k4):
        rep = gap_report(k4, 1)
        assert rep.floor_raw == pytest.approx(-1.0, abs=1e-9)
        assert rep.floor_clamped == 0.0
        assert rep.optimal_lambda1 == pytest.approx(2.0, abs=1e-9)
        assert rep.av11_lambda1 == pytest.approx(2.0, abs=1e-9)

    def test_k0_everything_equals_lambda1(self, c4):
        rep = gap_report(c4, 0)
        assert rep.floor_raw == rep.optimal_lambda1 == rep.av11_lambda1 == pytest.approx(2.0)

    def test_chain_floor_optimal_av11(self):
        for seed in range(6):
            g = random_graph(9, 0.3, seed + 40)
            s = spectrum(g)
            for k in (1, 2, 3):
                rep = gap_report(g, k)
                floor = separation_lower_bound(s, k)
                assert floor - 1e-9 <= rep.optimal_lambda1 <= rep.av11_lambda1 + 1e-9

    def test_exhaustive_chain_small_graphs(self):
        for seed in range(4):
            g = random_graph(7, 0.4, seed + 80)
            s = spectrum(g)
            for k in (1, 2, 3):
                floor = separation_lower_bound(s, k)
                for subset in combinations(range(g.n), k):
                    assert lam1(masked_adjacency(g, subset)) >= floor - 1e-9


class TestCsvExport:
    def test_columns_and_rows(self, c4):
        _, _, table = optimal_removal(c4, 2, keep_table=True)
        buf = io.StringIO()
        write_enumeration_csv(table, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "subset,residual_lambda1"
        assert len(lines) == 1 + len(table)
        assert lines[1].startswith("0 1,")

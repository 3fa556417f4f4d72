import io
import json

import pytest

from netimmune import BudgetSpec, ExperimentConfig, Strategy
from netimmune.cli import main
from netimmune.harness import (
    default_seeds,
    immunization_set,
    run_compare,
    write_table_csv,
)


@pytest.fixture
def p3_file(tmp_path):
    path = tmp_path / "p3.edges"
    path.write_text("0 1\n1 2\n")
    return str(path)


@pytest.fixture
def star_file(tmp_path):
    path = tmp_path / "star.edges"
    path.write_text("".join(f"0 {i}\n" for i in range(1, 5)))
    return str(path)


class TestRankCommand:
    def test_degree_table_output(self, p3_file, capsys):
        assert main(["rank", "--graph", p3_file, "--strategy", "degree"]) == 0
        assert capsys.readouterr().out == "1 2\n0 1\n2 1\n"

    def test_av11_star_hub_first(self, star_file, capsys):
        assert main(["rank", "--graph", star_file, "--strategy", "av11"]) == 0
        assert capsys.readouterr().out.splitlines()[0].startswith("0 ")

    def test_unknown_strategy_usage_error(self, p3_file, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["rank", "--graph", p3_file, "--strategy", "pagerank"])
        assert exc.value.code == 2
        assert "av11" in capsys.readouterr().err

    def test_json_and_csv_formats(self, p3_file, capsys, tmp_path):
        main(["rank", "--graph", p3_file, "--strategy", "degree", "--format", "json"])
        obj = json.loads(capsys.readouterr().out)
        assert obj["order"] == [1, 0, 2]
        out = tmp_path / "r.csv"
        main(["rank", "--graph", p3_file, "--strategy", "degree", "--format", "csv",
              "--output", str(out)])
        assert out.read_text().splitlines()[0] == "node,score"

    def test_most_infected_runs_with_rotation_default(self, p3_file, capsys):
        assert main(["rank", "--graph", p3_file, "--strategy", "most-infected",
                     "--trials", "6", "--steps", "5"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 3

    def test_builtin_ieee118(self, capsys):
        assert main(["rank", "--graph", "ieee118", "--strategy", "degree"]) == 0
        top = capsys.readouterr().out.splitlines()[0]
        assert top == "48 9"  # bus 49, the highest-degree bus

    def test_missing_file_exits_3(self, capsys):
        assert main(["rank", "--graph", "/nope/missing.edges", "--strategy", "degree"]) == 3
        assert "error" in capsys.readouterr().err


class TestThresholdCommand:
    def test_k2_above_threshold(self, tmp_path, capsys):
        path = tmp_path / "k2.edges"
        path.write_text("0 1\n")
        assert main(["threshold", "--graph", str(path), "--beta-range", "0.5", "0.5",
                     "--delta-range", "0.4", "0.4"]) == 0
        out = capsys.readouterr().out
        assert "lambda_M = 1.100000 (above threshold)" in out
        assert "lambda_1(A) = 1.000000" in out

    def test_below_threshold(self, tmp_path, capsys):
        path = tmp_path / "k2.edges"
        path.write_text("0 1\n")
        assert main(["threshold", "--graph", str(path), "--beta-range", "0.5", "0.5",
                     "--delta-range", "0.95", "0.95"]) == 0
        assert "below threshold" in capsys.readouterr().out


class TestOracleCommand:
    def test_reports_three_residuals(self, star_file, capsys):
        assert main(["oracle", "--graph", star_file, "-k", "1"]) == 0
        out = capsys.readouterr().out
        assert "separation floor" in out
        assert "optimal residual" in out
        assert "av11 residual" in out

    def test_guard_exit_3_with_count(self, tmp_path, capsys):
        import networkx as nx

        path = tmp_path / "big.edges"
        nxg = nx.gnp_random_graph(40, 0.3, seed=1)
        path.write_text("".join(f"{u} {v}\n" for u, v in nxg.edges()))
        assert main(["oracle", "--graph", str(path), "-k", "12"]) == 3
        import math

        assert str(math.comb(40, 12)) in capsys.readouterr().err

    def test_table_csv(self, star_file, tmp_path, capsys):
        out = tmp_path / "table.csv"
        assert main(["oracle", "--graph", star_file, "-k", "1", "--table", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "subset,residual_lambda1"


class TestSimulateCommand:
    def test_writes_traces(self, star_file, tmp_path, capsys):
        out = tmp_path / "sim.json"
        assert main(["simulate", "--graph", star_file, "--seeds", "1", "--immunized", "0",
                     "--steps", "5", "--trials", "4", "--output", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert len(payload["outcomes"]) == 4
        assert all(len(o["infected_counts"]) == 6 for o in payload["outcomes"])

    def test_seed_immunized_clash_exits_3(self, star_file, capsys):
        assert main(["simulate", "--graph", star_file, "--seeds", "0",
                     "--immunized", "0"]) == 3


class TestCompareCommand:
    def test_budget_zero_rows_identical(self, tmp_path, capsys):
        import networkx as nx

        path = tmp_path / "g.edges"
        nxg = nx.gnp_random_graph(12, 0.3, seed=4)
        path.write_text("".join(f"{u} {v}\n" for u, v in nxg.edges()))
        csv_out = tmp_path / "out.csv"
        assert main(["compare", "--graph", str(path), "--budget", "0",
                     "--steps", "10", "--trials", "8", "--seeds", "0", "1",
                     "--output-csv", str(csv_out)]) == 0
        rows = [line.split(",") for line in csv_out.read_text().splitlines()
                if not line.startswith("#")][1:]
        means = {row[2] for row in rows}
        stds = {row[3] for row in rows}
        assert len(means) == 1 and len(stds) == 1

    def test_replay_byte_identical_csv(self, tmp_path):
        import networkx as nx

        path = tmp_path / "g.edges"
        nxg = nx.gnp_random_graph(14, 0.3, seed=5)
        path.write_text("".join(f"{u} {v}\n" for u, v in nxg.edges()))
        cfg = {
            "graph": str(path),
            "budget": {"count": 3},
            "seeds": [0, 7],
            "steps": 15,
            "trials": 10,
            "master_seed": 11,
            "output_csv": str(tmp_path / "a.csv"),
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        assert main(["compare", "--config", str(cfg_path)]) == 0
        first = (tmp_path / "a.csv").read_bytes()
        assert main(["compare", "--config", str(cfg_path),
                     "--output-csv", str(tmp_path / "b.csv")]) == 0
        assert (tmp_path / "b.csv").read_bytes() == first

    def test_version_and_hash_embedded(self, tmp_path):
        import networkx as nx
        from netimmune import __version__

        path = tmp_path / "g.edges"
        nxg = nx.gnp_random_graph(10, 0.4, seed=6)
        path.write_text("".join(f"{u} {v}\n" for u, v in nxg.edges()))
        csv_out = tmp_path / "t.csv"
        json_out = tmp_path / "t.json"
        assert main(["compare", "--graph", str(path), "--budget", "2", "--steps", "5",
                     "--trials", "4", "--seeds", "0", "--output-csv", str(csv_out),
                     "--output-json", str(json_out)]) == 0
        text = csv_out.read_text()
        assert f"# netimmune {__version__}" in text
        assert "# config_sha256" in text
        payload = json.loads(json_out.read_text())
        assert payload["version"] == __version__
        assert payload["config_sha256"]
        again = ExperimentConfig.from_json_obj(payload["config"])
        assert again.config_sha256() == payload["config_sha256"]

    def test_budget_not_below_n_exits_3(self, p3_file, capsys):
        assert main(["compare", "--graph", p3_file, "--budget", "3",
                     "--seeds", "0"]) == 3

    def test_empty_seed_set_exits_3(self, p3_file, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"graph": p3_file, "budget": {"count": 1},
                                   "seeds": [], "steps": 3, "trials": 2}))
        assert main(["compare", "--config", str(cfg)]) == 3
        assert "seed set" in capsys.readouterr().err

    def test_zero_beta_bounds_rows_by_seed_count(self, tmp_path):
        import networkx as nx

        path = tmp_path / "g.edges"
        nxg = nx.gnp_random_graph(10, 0.4, seed=3)
        path.write_text("".join(f"{u} {v}\n" for u, v in nxg.edges()))
        json_out = tmp_path / "t.json"
        assert main(["compare", "--graph", str(path), "--budget", "2",
                     "--beta-range", "0", "0", "--steps", "8", "--trials", "6",
                     "--seeds", "0", "3", "--output-json", str(json_out)]) == 0
        payload = json.loads(json_out.read_text())
        assert all(row["mean_final_infected"] <= 2 for row in payload["rows"])

    def test_bad_rate_range_exits_3(self, p3_file, capsys):
        assert main(["compare", "--graph", p3_file, "--budget", "1", "--seeds", "0",
                     "--beta-range", "0.9", "0.1"]) == 3


class TestHarnessPieces:
    def test_immunization_skips_seeds(self):
        assert immunization_set([5, 3, 1, 0], 2, seeds={3}) == [5, 1]
        with pytest.raises(ValueError):
            immunization_set([0, 1], 2, seeds={0, 1})

    def test_default_seeds_deterministic(self):
        from netimmune import ieee118_graph

        g = ieee118_graph()
        a = default_seeds(g, 42)
        assert a == default_seeds(g, 42)
        assert len(a) == 6
        assert a != default_seeds(g, 43)

    def test_config_json_roundtrip(self, tmp_path):
        config = ExperimentConfig(graph="ieee118", budget=BudgetSpec.from_fraction(0.16),
                                  seeds=(1, 2), strategies=(Strategy.AV11, Strategy.DEGREE))
        again = ExperimentConfig.from_json_obj(
            json.loads(json.dumps(config.to_json_obj())))
        assert again == config

    def test_rows_sorted_ascending_and_pct(self, tmp_path):
        import networkx as nx
        from netimmune import Graph

        nxg = nx.gnp_random_graph(12, 0.35, seed=9)
        path = tmp_path / "g.json"
        g = Graph(12, list(nxg.edges()))
        from netimmune import serialize_graph

        path.write_text(serialize_graph(g, "json"))
        config = ExperimentConfig(graph=str(path), budget=BudgetSpec.from_count(2),
                                  seeds=(0,), steps=10, trials=6)
        table = run_compare(config)
        means = [r.mean_final_infected for r in table.rows]
        assert means == sorted(means)
        for r in table.rows:
            assert r.pct_of_n == pytest.approx(100 * r.mean_final_infected / 12)
            assert r.rank == table.rows.index(r) + 1
            assert not (set(r.immunized) & {0})

    def test_csv_writer_sorted_rows(self, tmp_path):
        import networkx as nx
        from netimmune import Graph, serialize_graph

        nxg = nx.gnp_random_graph(10, 0.4, seed=2)
        path = tmp_path / "g.json"
        path.write_text(serialize_graph(Graph(10, list(nxg.edges())), "json"))
        config = ExperimentConfig(graph=str(path), budget=BudgetSpec.from_count(1),
                                  seeds=(0,), steps=5, trials=4)
        table = run_compare(config)
        buf = io.StringIO()
        write_table_csv(table, buf)
        data_rows = [l for l in buf.getvalue().splitlines() if not l.startswith("#")][1:]
        assert [int(r.split(",")[0]) for r in data_rows] == list(range(1, len(data_rows) + 1))

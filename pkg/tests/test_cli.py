import json

import pytest

from ectrl.cli import main
from ectrl.config import CONFIG_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGen:
    def test_er_writes_file_and_summary(self, tmp_path, capsys):
        out = tmp_path / "g.edges"
        code, stdout, _ = run(capsys, "gen", "--model", "er", "--n", "100", "--k", "6",
                              "--seed", "1", "--out", str(out))
        assert code == 0
        assert out.exists()
        assert "N=100" in stdout and "mean_degree" in stdout

    def test_negative_k_exits_2(self, tmp_path, capsys):
        code, _, _ = run(capsys, "gen", "--model", "er", "--n", "10", "--k", "-1",
                         "--out", str(tmp_path / "x"))
        assert code == 2

    def test_same_flags_identical_files(self, tmp_path, capsys):
        a, b = tmp_path / "a", tmp_path / "b"
        for p in (a, b):
            run(capsys, "gen", "--model", "sf", "--n", "80", "--k", "4", "--seed", "3",
                "--out", str(p))
        assert a.read_bytes() == b.read_bytes()


@pytest.fixture
def chain_file(tmp_path):
    p = tmp_path / "chain.edges"
    p.write_text("N 3 directed 1\n0 1\n1 2\n")
    return p


class TestAnalyze:
    def test_chain_et(self, chain_file, capsys):
        code, stdout, _ = run(capsys, "analyze", str(chain_file), "--method", "et")
        assert code == 0
        doc = json.loads(stdout)
        assert doc["n_d"] == 1 and doc["method"] == "ET"

    def test_empty_graph(self, tmp_path, capsys):
        p = tmp_path / "e.edges"
        p.write_text("N 3 directed 0\n")
        code, stdout, _ = run(capsys, "analyze", str(p))
        assert code == 0 and json.loads(stdout)["n_d"] == 3

    def test_types_flag(self, tmp_path, capsys):
        p = tmp_path / "e.edges"
        p.write_text("N 4 directed 0\n")
        code, stdout, _ = run(capsys, "analyze", str(p), "--types", "2:0.5,0:0.5")
        assert code == 0 and json.loads(stdout)["n_d"] == 2

    def test_unknown_method_exits_2(self, chain_file, capsys):
        code, _, _ = run(capsys, "analyze", str(chain_file), "--method", "bogus")
        assert code == 2

    def test_bad_types_exits_2(self, chain_file, capsys):
        code, _, _ = run(capsys, "analyze", str(chain_file), "--types", "nonsense")
        assert code == 2


class TestSweep:
    def config(self, tmp_path, **over):
        doc = {
            "experiment": "RHO_SWEEP",
            "graph": {"model": "er", "n_nodes": 30, "mean_degree": 3.0},
            "unit_eigenvalues": [[3], [0]],
            "rho_grid": ["0", "1/2", "1"],
            "realizations": 3,
            "master_seed": 5,
            "methods": ["et"],
            "trials": 1,
        }
        doc.update(over)
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(doc))
        return p

    def test_writes_csv(self, tmp_path, capsys):
        cfgp = self.config(tmp_path)
        out = tmp_path / "out.csv"
        code, _, err = run(capsys, "sweep", str(cfgp), "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 4 and lines[0].startswith("experiment,")

    def test_invalid_experiment_exits_2(self, tmp_path, capsys):
        cfgp = self.config(tmp_path, experiment="WAT")
        code, _, err = run(capsys, "sweep", str(cfgp), "--out", str(tmp_path / "o.csv"))
        assert code == 2 and "schema" in err

    def test_rerun_byte_identical(self, tmp_path, capsys):
        cfgp = self.config(tmp_path)
        o1, o2 = tmp_path / "1.csv", tmp_path / "2.csv"
        run(capsys, "sweep", str(cfgp), "--out", str(o1))
        run(capsys, "sweep", str(cfgp), "--out", str(o2), "--jobs", "2")
        assert o1.read_bytes() == o2.read_bytes()


class TestOracle:
    def test_small_run_passes(self, capsys):
        code, stdout, _ = run(capsys, "oracle", "--instances", "25", "--max-n", "6",
                              "--seed", "3")
        assert code == 0
        assert "shift-check: 25/25" in stdout

    def test_max_n_above_cap_exits_2(self, capsys):
        code, _, _ = run(capsys, "oracle", "--max-n", "20")
        assert code == 2

    def test_zero_instances_exits_2(self, capsys):
        code, _, _ = run(capsys, "oracle", "--instances", "0")
        assert code == 2


class TestSchema:
    def test_prints_schema(self, capsys):
        code, stdout, _ = run(capsys, "schema")
        assert code == 0
        assert json.loads(stdout) == CONFIG_SCHEMA

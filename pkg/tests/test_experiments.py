from fractions import Fraction as F

import numpy as np
import pytest

from ectrl.config import CONFIG_SCHEMA, config_from_dict, config_to_dict
from ectrl.experiments import (
    ExperimentConfig,
    InvalidConfigError,
    SweepRow,
    _grid,
    emit_csv,
    read_csv,
    run_sweep,
)
from ectrl.netgen import GraphSpec

ER50 = GraphSpec("er", 50, 3.0)
TWO_TYPES = ((F(3),), (F(0),))


def small_cfg(**kw):
    base = dict(
        experiment="RHO_SWEEP",
        graph=ER50,
        unit_eigenvalues=TWO_TYPES,
        rho_grid=(F(0), F(1, 2), F(1)),
        realizations=4,
        master_seed=11,
        methods=("et",),
        trials=1,
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestValidation:
    def test_unknown_experiment(self):
        with pytest.raises(InvalidConfigError):
            small_cfg(experiment="NOPE").validate()

    def test_bad_method(self):
        with pytest.raises(InvalidConfigError):
            small_cfg(methods=("voodoo",)).validate()

    def test_delta_out_of_range(self):
        cfg = small_cfg(
            experiment="DELTA_SWEEP",
            unit_eigenvalues=((F(1),), (F(2),), (F(3),)),
            delta_grid=(F(3, 2),),
        )
        with pytest.raises(InvalidConfigError):
            _grid(cfg)

    def test_ns_above_n(self):
        cfg = small_cfg(experiment="NS_SWEEP", ns_grid=(60,))
        with pytest.raises(InvalidConfigError):
            _grid(cfg)


class TestGrids:
    def test_rho_grid_coords(self):
        pts = _grid(small_cfg())
        assert [p.coords[0] for p in pts] == [0.0, 0.5, 1.0]
        assert pts[1].densities == (F(1, 2), F(1, 2))

    def test_simplex_grid_size(self):
        cfg = small_cfg(
            experiment="SIMPLEX3",
            unit_eigenvalues=((F(1),), (F(2),), (F(3),)),
            simplex_step=F(1, 2),
        )
        assert len(_grid(cfg)) == 6

    def test_delta_construction(self):
        from ectrl.dynamics import delta

        cfg = small_cfg(
            experiment="DELTA_SWEEP",
            unit_eigenvalues=((F(1),), (F(2),), (F(3),)),
            delta_grid=(F(0), F(2, 3), F(4, 3)),
        )
        pts = _grid(cfg)
        for p, target in zip(pts, (0.0, 2 / 3, 4 / 3)):
            assert delta(p.densities) == pytest.approx(target)
        # maximum delta collapses to a single type
        assert pts[-1].densities[0] == 1

    def test_ns_reference_value(self):
        cfg = small_cfg(experiment="NS_SWEEP", ns_grid=(2, 5))
        pts = _grid(cfg)
        assert pts[0].coords[1] == 0.5 and pts[1].coords[1] == 0.2

    def test_linkweight_grid(self):
        cfg = small_cfg(
            experiment="LINKWEIGHT_SWEEP",
            unit_eigenvalues=(),
            q_grid=(F(0), F(1, 2)),
            k_grid=(3.0, 6.0),
        )
        pts = _grid(cfg)
        assert len(pts) == 4
        assert pts[0].extra_candidates == (F(1), F(-1))


class TestRunSweep:
    def test_row_schema_and_order(self):
        rows = run_sweep(small_cfg(methods=("et", "sct_matching")))
        assert len(rows) == 6
        assert [r.method for r in rows[:2]] == ["et", "sct_matching"]
        for r in rows:
            assert 1 / 50 <= r.mean_nd <= 1
            assert r.stderr == pytest.approx(r.std / np.sqrt(r.realizations))

    def test_deterministic_across_jobs(self, tmp_path):
        rows1 = run_sweep(small_cfg(jobs=1))
        rows2 = run_sweep(small_cfg(jobs=3))
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(rows1, p1)
        emit_csv(rows2, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_seed_sensitivity(self):
        r1 = run_sweep(small_cfg(master_seed=1))
        r2 = run_sweep(small_cfg(master_seed=2))
        assert any(a.mean_nd != b.mean_nd for a, b in zip(r1, r2))

    def test_order_sweep_reports_both_fractions(self):
        cfg = small_cfg(
            experiment="ORDER_SWEEP",
            order=2,
            graph=GraphSpec("er", 20, 3.0),
            unit_eigenvalues=((F(2), F(3)), (F(4), F(5))),
            rho_grid=(F(1, 2),),
            realizations=2,
        )
        rows = run_sweep(cfg)
        by_method = {r.method: r for r in rows}
        assert by_method["et:per_node"].mean_nd == pytest.approx(2 * by_method["et"].mean_nd)

    @pytest.mark.slow
    def test_linkweight_regimes(self):
        """Shared link weights barely matter on sparse graphs but inflate the
        driver count on near-complete ones (adjacent-twin degeneracy)."""
        cfg = ExperimentConfig(
            experiment="LINKWEIGHT_SWEEP",
            graph=GraphSpec("er", 60, 4.0),
            unit_eigenvalues=(),
            q_grid=(F(0), F(9, 10), F(1)),
            k_grid=(F(4), F(56)),
            shared_weight=F(1),
            realizations=5,
            master_seed=77,
            methods=("et",),
        )
        by = {(r.coords[1], r.coords[0]): r.mean_nd for r in run_sweep(cfg)}
        # q=0 reduces to the all-free-weight baseline
        assert by[(4.0, 0.0)] >= 1 / 60
        # sparse: fixing 90% of the weights moves n_D by < 0.05
        assert abs(by[(4.0, 0.9)] - by[(4.0, 0.0)]) < 0.05
        # near-complete: uniform weights create degenerate modes
        assert by[(56.0, 1.0)] > 2 * by[(56.0, 0.0)]

    def test_ns_equals_n_gives_single_driver(self):
        cfg = small_cfg(
            experiment="NS_SWEEP",
            graph=GraphSpec("er", 12, 3.0),
            unit_eigenvalues=(),
            ns_grid=(12,),
            realizations=3,
        )
        rows = run_sweep(cfg)
        assert rows[0].mean_nd == pytest.approx(1 / 12)
        assert rows[0].std == 0.0


class TestEmitCsv:
    def test_header_plus_rows(self, tmp_path):
        rows = [
            SweepRow("RHO_SWEEP", (0.5, None, None), "et", 0.1, 0.01, 0.005, 4, 0.0)
        ] * 3
        p = tmp_path / "x.csv"
        emit_csv(rows, p)
        assert len(p.read_text().splitlines()) == 4

    def test_empty(self, tmp_path):
        p = tmp_path / "e.csv"
        emit_csv([], p)
        assert p.read_text() == "experiment,coord1,coord2,coord3,method,mean_nd,std,stderr,R,seconds\n"

    def test_round_trip(self, tmp_path):
        rows = run_sweep(small_cfg())
        p = tmp_path / "r.csv"
        emit_csv(rows, p)
        parsed = read_csv(p)
        assert len(parsed) == len(rows)
        assert float(parsed[0]["mean_nd"]) == pytest.approx(rows[0].mean_nd)


class TestConfigJson:
    def test_round_trip(self):
        cfg = small_cfg()
        doc = config_to_dict(cfg)
        import jsonschema

        jsonschema.validate(doc, CONFIG_SCHEMA)
        cfg2 = config_from_dict(doc)
        assert cfg2 == cfg

    def test_rejects_unknown_key(self):
        doc = config_to_dict(small_cfg())
        doc["bogus"] = 1
        with pytest.raises(InvalidConfigError):
            config_from_dict(doc)

    def test_shipped_configs_validate(self):
        import json
        from pathlib import Path

        cfg_dir = Path(__file__).resolve().parent.parent / "configs"
        paths = sorted(cfg_dir.glob("*.json"))
        assert paths, "no shipped configs found"
        for p in paths:
            cfg = config_from_dict(json.loads(p.read_text()))
            cfg.validate()
            _grid(cfg)

    def test_fraction_strings(self):
        doc = {
            "experiment": "RHO_SWEEP",
            "graph": {"model": "er", "n_nodes": 10, "mean_degree": 2.0},
            "unit_eigenvalues": [["1/3"], [0]],
            "rho_grid": ["1/2"],
        }
        cfg = config_from_dict(doc)
        assert cfg.unit_eigenvalues[0][0] == F(1, 3)
        assert cfg.rho_grid == (F(1, 2),)

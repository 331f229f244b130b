"""Ensemble experiments: sweep a grid, average driver fractions over
realizations, emit deterministic CSV.

Seed discipline: every (grid-point, realization) task derives its
randomness from SeedSequence([master_seed, grid_index, realization_index,
stream]) where stream tags the topology / assignment / rank draws. The
task set is embarrassingly parallel and aggregation is keyed, so results
are byte-identical at any worker count.
"""

from __future__ import annotations

import csv
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import control, dynamics, netgen
from .dynamics import Assignment, assign_types, assemble, delta, densities_on_simplex, make_unit_type
from .netgen import GraphSpec, generate

EXPERIMENTS = (
    "RHO_SWEEP",
    "SIMPLEX3",
    "DELTA_SWEEP",
    "NS_SWEEP",
    "ORDER_SWEEP",
    "LINKWEIGHT_SWEEP",
)
METHODS = ("et", "ect_numeric", "ect_symmetric", "sct_matching")

CSV_HEADER = "experiment,coord1,coord2,coord3,method,mean_nd,std,stderr,R,seconds"


class InvalidConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    graph: GraphSpec
    order: int = 1
    # one eigenvalue list per unit type, e.g. [[3], [0]]
    unit_eigenvalues: tuple[tuple[Fraction, ...], ...] = ()
    # grid knobs (which ones apply depends on the experiment)
    rho_grid: tuple[Fraction, ...] = ()
    simplex_step: Fraction = Fraction(1, 6)
    delta_grid: tuple[Fraction, ...] = ()
    ns_grid: tuple[int, ...] = ()
    q_grid: tuple[Fraction, ...] = ()
    k_grid: tuple[float, ...] = ()
    shared_weight: Fraction = Fraction(1)
    realizations: int = 30
    master_seed: int = 0
    methods: tuple[str, ...] = ("et",)
    trials: int = 3  # finite-field trials per rank query
    jobs: int = 1
    timing: bool = False  # when False the seconds column is written as 0

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise InvalidConfigError(f"unknown experiment {self.experiment!r}")
        if self.realizations < 1:
            raise InvalidConfigError("realizations must be >= 1")
        if not self.methods:
            raise InvalidConfigError("at least one method required")
        for m in self.methods:
            if m not in METHODS:
                raise InvalidConfigError(f"unknown method {m!r}")
        if self.trials < 1:
            raise InvalidConfigError("trials must be >= 1")


@dataclass(frozen=True)
class SweepRow:
    experiment: str
    coords: tuple  # up to 3 coordinates, None-padded
    method: str
    mean_nd: float
    std: float
    stderr: float
    realizations: int
    seconds: float


@dataclass(frozen=True)
class _GridPoint:
    coords: tuple
    types: tuple  # eigenvalue list per type
    densities: tuple
    graph: GraphSpec | None = None  # override (linkweight sweep varies <k>)
    fixed_fraction: Fraction | None = None  # linkweight sweep: fraction of const edges
    extra_candidates: tuple = ()


def _task_seeds(master_seed: int, g_idx: int, r_idx: int):
    base = [int(master_seed) & (2**63 - 1), g_idx, r_idx]
    return (
        np.random.SeedSequence(base + [0]),  # topology
        np.random.SeedSequence(base + [1]),  # assignment
        np.random.SeedSequence(base + [2]),  # fixed-edge choice
        int(np.random.SeedSequence(base + [3]).generate_state(1)[0]),  # rank seed
    )


def _run_task(cfg: ExperimentConfig, gp: _GridPoint, g_idx: int, r_idx: int) -> dict[str, float]:
    """One realization at one grid point; returns method -> N_D/(dN)."""
    topo_ss, asg_ss, fix_ss, rank_seed = _task_seeds(cfg.master_seed, g_idx, r_idx)
    gspec = gp.graph if gp.graph is not None else cfg.graph
    gspec = replace(gspec, seed=int(topo_ss.generate_state(1)[0]))
    t = generate(gspec)
    types = tuple(
        make_unit_type(cfg.order, eigs, type_id=i) for i, eigs in enumerate(gp.types)
    )
    a = assign_types(types, gp.densities, t.n_nodes, seed=int(asg_ss.generate_state(1)[0]))
    fixed = None
    if gp.fixed_fraction is not None and t.n_edges:
        n_fixed = int(gp.fixed_fraction * t.n_edges)
        rng = np.random.default_rng(fix_ss)
        idx = rng.choice(t.n_edges, size=n_fixed, replace=False)
        fixed = {int(i): Fraction(cfg.shared_weight) for i in idx}
    m = assemble(t, a, fixed_edges=fixed)
    out: dict[str, float] = {}
    for method in cfg.methods:
        if method == "et":
            res = control.nd_et(
                m, seed=rank_seed, trials=cfg.trials, extra_candidates=gp.extra_candidates
            )
        elif method == "ect_numeric":
            if m.dim > control.ECT_DIM_CAP:
                continue  # auto-disabled above the dense-eigensolve cap
            phi = _float_realization(m, rank_seed)
            res = control.nd_ect_numeric(phi)
        elif method == "ect_symmetric":
            if t.directed:
                continue
            phi = _float_realization(m, rank_seed)
            res = control.nd_ect_symmetric(phi)
        else:
            res = control.nd_sct_matching(t, a if cfg.order == 1 else None)
        out[method] = res.n_d / m.dim
        if cfg.order > 1:
            # higher-order runs report the per-node fraction as well
            out[method + ":per_node"] = res.n_d / m.n_nodes
    return out


def _float_realization(m, seed: int) -> np.ndarray:
    """Numeric realization with continuous weights (no accidental integer
    coincidences): free params uniform in [0.5, 1.5], constants exact."""
    from ectrl.dynamics import FreeParam

    rng = np.random.default_rng(seed)
    params = rng.uniform(0.5, 1.5, size=m.n_params)
    A = np.zeros((m.dim, m.dim))
    for r, c, e in m.entries:
        A[r, c] += params[e.param_id] if isinstance(e, FreeParam) else float(e.value)
    return A


def _grid(cfg: ExperimentConfig) -> list[_GridPoint]:
    ex = cfg.experiment
    if ex == "RHO_SWEEP" or ex == "ORDER_SWEEP":
        if len(cfg.unit_eigenvalues) != 2:
            raise InvalidConfigError(f"{ex} needs exactly two unit types")
        if ex == "RHO_SWEEP" and cfg.order != 1:
            raise InvalidConfigError("RHO_SWEEP is first-order")
        if ex == "ORDER_SWEEP" and cfg.order < 2:
            raise InvalidConfigError("ORDER_SWEEP needs order >= 2")
        grid = cfg.rho_grid or tuple(Fraction(i, 10) for i in range(11))
        return [
            _GridPoint((float(r), None, None), cfg.unit_eigenvalues, (r, 1 - r))
            for r in grid
        ]
    if ex == "SIMPLEX3":
        if len(cfg.unit_eigenvalues) != 3:
            raise InvalidConfigError("SIMPLEX3 needs exactly three unit types")
        pts = densities_on_simplex(cfg.simplex_step)
        return [
            _GridPoint(tuple(float(x) for x in p), cfg.unit_eigenvalues, p) for p in pts
        ]
    if ex == "DELTA_SWEEP":
        ns = len(cfg.unit_eigenvalues)
        if ns < 2:
            raise InvalidConfigError("DELTA_SWEEP needs at least two unit types")
        dmax = Fraction(2) * (1 - Fraction(1, ns))
        pts = []
        for dv in cfg.delta_grid:
            dv = Fraction(dv)
            if dv < 0 or dv > dmax:
                raise InvalidConfigError(f"delta {dv} outside [0, {dmax}]")
            # transfer mass x = delta/2 from the other types (equally) to type 1
            x = dv / 2
            dens = (Fraction(1, ns) + x,) + (Fraction(1, ns) - x / (ns - 1),) * (ns - 1)
            assert abs(delta(dens) - float(dv)) < 1e-12
            pts.append(_GridPoint((float(dv), None, None), cfg.unit_eigenvalues, dens))
        return pts
    if ex == "NS_SWEEP":
        grid = cfg.ns_grid
        if not grid:
            raise InvalidConfigError("NS_SWEEP needs ns_grid")
        pts = []
        for ns in grid:
            if ns < 1 or ns > cfg.graph.n_nodes:
                raise InvalidConfigError(f"N_s={ns} outside [1, N]")
            types = tuple((Fraction(i),) for i in range(1, ns + 1))
            dens = (Fraction(1, ns),) * ns
            # coord2 carries the 1/N_s reference value
            pts.append(_GridPoint((float(ns), 1.0 / ns, None), types, dens))
        return pts
    if ex == "LINKWEIGHT_SWEEP":
        qs = cfg.q_grid or (Fraction(0),)
        ks = cfg.k_grid or (cfg.graph.mean_degree,)
        pts = []
        for k in ks:
            for q in qs:
                q = Fraction(q)
                if q < 0 or q > 1:
                    raise InvalidConfigError(f"q={q} outside [0,1]")
                pts.append(
                    _GridPoint(
                        (float(q), float(k), None),
                        ((Fraction(0),),),
                        (Fraction(1),),
                        graph=replace(cfg.graph, mean_degree=float(k)),
                        fixed_fraction=q,
                        # +w per the single-type analogy; -w catches the
                        # adjacent-twin degeneracy of very dense equal-weight
                        # graphs (harmless otherwise: full generic rank)
                        extra_candidates=(
                            Fraction(cfg.shared_weight),
                            -Fraction(cfg.shared_weight),
                        ),
                    )
                )
        return pts
    raise InvalidConfigError(f"unknown experiment {ex!r}")


def _worker(args):
    cfg, gp, g_idx, r_idx = args
    return (g_idx, r_idx), _run_task(cfg, gp, g_idx, r_idx)


def run_sweep(cfg: ExperimentConfig, progress=None) -> list[SweepRow]:
    """Run the configured experiment; one SweepRow per (grid point, method)."""
    cfg.validate()
    grid = _grid(cfg)
    tasks = [
        (cfg, gp, g_idx, r_idx)
        for g_idx, gp in enumerate(grid)
        for r_idx in range(cfg.realizations)
    ]
    t0 = time.perf_counter()
    results: dict[tuple[int, int], dict[str, float]] = {}
    if cfg.jobs > 1:
        # spawn: fork is unsafe once the jit runtime has started its threads
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=cfg.jobs, mp_context=ctx) as pool:
            for key, val in pool.map(_worker, tasks, chunksize=4):
                results[key] = val
                if progress:
                    progress(len(results), len(tasks))
    else:
        for task in tasks:
            key, val = _worker(task)
            results[key] = val
            if progress:
                progress(len(results), len(tasks))
    elapsed = time.perf_counter() - t0
    per_point = elapsed / max(1, len(grid))
    method_keys = list(cfg.methods)
    if cfg.order > 1:
        method_keys += [m + ":per_node" for m in cfg.methods]
    rows = []
    for g_idx, gp in enumerate(grid):
        for method in method_keys:
            vals = [
                results[(g_idx, r)][method]
                for r in range(cfg.realizations)
                if method in results[(g_idx, r)]
            ]
            if not vals:
                continue
            arr = np.array(vals)
            mean = float(arr.mean())
            std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
            rows.append(
                SweepRow(
                    experiment=cfg.experiment,
                    coords=gp.coords,
                    method=method,
                    mean_nd=mean,
                    std=std,
                    stderr=std / np.sqrt(len(arr)),
                    realizations=len(arr),
                    seconds=per_point if cfg.timing else 0.0,
                )
            )
    return rows


def run_rho_sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    return run_sweep(replace(cfg, experiment="RHO_SWEEP"))


def run_simplex3(cfg: ExperimentConfig) -> list[SweepRow]:
    return run_sweep(replace(cfg, experiment="SIMPLEX3"))


def run_delta_sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    return run_sweep(replace(cfg, experiment="DELTA_SWEEP"))


def run_ns_sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    return run_sweep(replace(cfg, experiment="NS_SWEEP"))


def run_order_sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    return run_sweep(replace(cfg, experiment="ORDER_SWEEP"))


def run_linkweight_sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    return run_sweep(replace(cfg, experiment="LINKWEIGHT_SWEEP"))


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.10g}"


def emit_csv(rows: Sequence[SweepRow], path) -> None:
    """Write rows in grid order (then method order) under the fixed header."""
    try:
        with open(path, "w", newline="") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in rows:
                c = tuple(row.coords) + (None,) * (3 - len(row.coords))
                fh.write(
                    ",".join(
                        [
                            row.experiment,
                            _fmt(c[0]),
                            _fmt(c[1]),
                            _fmt(c[2]),
                            row.method,
                            _fmt(row.mean_nd),
                            _fmt(row.std),
                            _fmt(row.stderr),
                            str(row.realizations),
                            _fmt(row.seconds),
                        ]
                    )
                    + "\n"
                )
    except OSError as exc:
        raise OSError(f"writing {path}: {exc}") from exc


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))

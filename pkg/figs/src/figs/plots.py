"""Render sweep CSVs into static figures.

The only coupling to the producer is the CSV contract:
``experiment,coord1,coord2,coord3,method,mean_nd,std,stderr,R,seconds``.
Each plot function returns the arrays it drew so callers (and tests) can
inspect exactly what ended up in the figure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXPECTED_COLUMNS = [
    "experiment", "coord1", "coord2", "coord3", "method",
    "mean_nd", "std", "stderr", "R", "seconds",
]

KIND_EXPERIMENTS = {
    "line": {"RHO_SWEEP", "ORDER_SWEEP", "LINKWEIGHT_SWEEP"},
    "ternary": {"SIMPLEX3"},
    "delta": {"DELTA_SWEEP"},
    "ns": {"NS_SWEEP"},
}


class CsvContractError(ValueError):
    pass


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    kind: str  # line | ternary | delta | ns
    out_path: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = "n_D"
    loglog: bool = False


def load_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EXPECTED_COLUMNS:
            raise CsvContractError(
                f"{path}: columns {reader.fieldnames} do not match the sweep schema"
            )
        rows = list(reader)
    if not rows:
        raise CsvContractError(f"{path}: no data rows")
    return rows


def _check_kind(rows, kind, path):
    experiments = {r["experiment"] for r in rows}
    allowed = KIND_EXPERIMENTS[kind]
    if not experiments <= allowed:
        raise CsvContractError(
            f"{path}: experiments {sorted(experiments)} incompatible with kind {kind!r}"
        )


def plot_line(spec: PlotSpec) -> dict:
    """One errorbar curve per method, coord1 on the x axis."""
    rows = load_rows(spec.csv_path)
    _check_kind(rows, "line", spec.csv_path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    curves = {}
    for method in dict.fromkeys(r["method"] for r in rows):
        sel = [r for r in rows if r["method"] == method]
        x = np.array([float(r["coord1"]) for r in sel])
        y = np.array([float(r["mean_nd"]) for r in sel])
        err = np.array([float(r["stderr"]) for r in sel])
        ax.errorbar(x, y, yerr=2 * err, marker="o", ms=4, capsize=3, label=method)
        curves[method] = (x, y, err)
    ax.set_xlabel(spec.xlabel or "fraction")
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return {"curves": curves}


def plot_ternary(spec: PlotSpec) -> dict:
    """Simplex heatmap: each density triple drawn at its barycentric point,
    colored by mean n_D, with a color bar."""
    rows = load_rows(spec.csv_path)
    _check_kind(rows, "ternary", spec.csv_path)
    r1 = np.array([float(r["coord1"]) for r in rows])
    r2 = np.array([float(r["coord2"]) for r in rows])
    r3 = np.array([float(r["coord3"]) for r in rows])
    vals = np.array([float(r["mean_nd"]) for r in rows])
    # barycentric -> 2D
    x = r2 + r3 / 2.0
    y = r3 * np.sqrt(3) / 2.0
    fig, ax = plt.subplots(figsize=(5, 4.5))
    n_side = len(np.unique(np.round(r1, 12)))
    marker_size = (220 / max(1, n_side - 1)) ** 2
    sc = ax.scatter(x, y, c=vals, s=marker_size, marker="h", cmap="viridis")
    fig.colorbar(sc, ax=ax, label=spec.ylabel)
    for (cx, cy, lbl) in [(0, 0, "rho1"), (1, 0, "rho2"), (0.5, np.sqrt(3) / 2, "rho3")]:
        ax.annotate(lbl, (cx, cy), textcoords="offset points", xytext=(0, 6), ha="center")
    ax.set_aspect("equal")
    ax.set_axis_off()
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    imin = int(np.argmin(vals))
    return {
        "coords": np.stack([r1, r2, r3], axis=1),
        "values": vals,
        "min_cell": (r1[imin], r2[imin], r3[imin]),
    }


def plot_delta(spec: PlotSpec) -> dict:
    """Driver fraction vs density heterogeneity."""
    rows = load_rows(spec.csv_path)
    _check_kind(rows, "delta", spec.csv_path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    curves = {}
    for method in dict.fromkeys(r["method"] for r in rows):
        sel = [r for r in rows if r["method"] == method]
        x = np.array([float(r["coord1"]) for r in sel])
        y = np.array([float(r["mean_nd"]) for r in sel])
        err = np.array([float(r["stderr"]) for r in sel])
        ax.errorbar(x, y, yerr=2 * err, marker="s", ms=4, capsize=3, label=method)
        curves[method] = (x, y, err)
    ax.set_xlabel(spec.xlabel or "density heterogeneity")
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return {"curves": curves}


def plot_ns(spec: PlotSpec) -> dict:
    """Driver fraction vs number of dynamics types, with the dotted 1/N_s
    reference line."""
    rows = load_rows(spec.csv_path)
    _check_kind(rows, "ns", spec.csv_path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    curves = {}
    for method in dict.fromkeys(r["method"] for r in rows):
        sel = [r for r in rows if r["method"] == method]
        x = np.array([float(r["coord1"]) for r in sel])
        y = np.array([float(r["mean_nd"]) for r in sel])
        err = np.array([float(r["stderr"]) for r in sel])
        ax.errorbar(x, y, yerr=2 * err, marker="o", ms=4, capsize=3, label=method)
        curves[method] = (x, y, err)
    ns_vals = np.array(sorted({float(r["coord1"]) for r in rows}))
    ref = 1.0 / ns_vals
    ax.plot(ns_vals, ref, linestyle=":", color="k", label="1/N_s")
    if spec.loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or "number of types N_s")
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return {"curves": curves, "reference": (ns_vals, ref)}


PLOTTERS = {
    "line": plot_line,
    "ternary": plot_ternary,
    "delta": plot_delta,
    "ns": plot_ns,
}


def render(spec: PlotSpec) -> dict:
    if spec.kind not in PLOTTERS:
        raise CsvContractError(f"unknown figure kind {spec.kind!r}")
    return PLOTTERS[spec.kind](spec)

"""Figure rendering for sweep CSVs."""

from .plots import PlotSpec, plot_delta, plot_line, plot_ns, plot_ternary, render

__all__ = ["PlotSpec", "plot_delta", "plot_line", "plot_ns", "plot_ternary", "render"]

"""Figure rendering for partition-mac CSV artifacts."""

from .render import PlotSpec, plot_pe_vs_ratio, plot_thresholds, render
from .schema import EmptyInputError, SchemaError, load_rates_csv, load_sweep_csv

__all__ = [
    "PlotSpec",
    "EmptyInputError",
    "SchemaError",
    "load_rates_csv",
    "load_sweep_csv",
    "plot_pe_vs_ratio",
    "plot_thresholds",
    "render",
]

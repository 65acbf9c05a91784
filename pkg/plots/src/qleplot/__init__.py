"""Grouped bar charts for Hamiltonian-learning results CSVs."""

from .plotting import (
    EmptyCsvError,
    GroupStats,
    PlotSpec,
    SchemaError,
    compute_stats,
    load_rows,
    render_comparison,
)

__version__ = "0.1.0"

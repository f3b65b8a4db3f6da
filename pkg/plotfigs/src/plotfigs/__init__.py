"""Figures from the reconstruction harness's CSV outputs."""

from .render import dump_series, render, series_for
from .schema import (
    COLUMNS_FOR_KIND,
    KINDS,
    PROB_COLUMNS,
    SWEEP_COLUMNS,
    FigureSpec,
    SchemaError,
    load_rows,
)

__all__ = [
    "COLUMNS_FOR_KIND",
    "FigureSpec",
    "KINDS",
    "PROB_COLUMNS",
    "SWEEP_COLUMNS",
    "SchemaError",
    "dump_series",
    "load_rows",
    "render",
    "series_for",
]

__version__ = "0.1.0"

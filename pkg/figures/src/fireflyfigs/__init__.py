"""Figure rendering for firefly synchronization sweep and trajectory CSVs."""

__version__ = "0.1.0"

from .figures import (FIGURE_KINDS, RUN_CSV_COLUMNS, SUCCESS_BOUNDARY,
                      TRAJECTORY_CSV_COLUMNS, FigureSpec, load_table, render)

__all__ = [
    "FIGURE_KINDS",
    "RUN_CSV_COLUMNS",
    "SUCCESS_BOUNDARY",
    "TRAJECTORY_CSV_COLUMNS",
    "FigureSpec",
    "load_table",
    "render",
]

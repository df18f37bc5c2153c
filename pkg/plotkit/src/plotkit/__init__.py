"""Figure rendering for longitudinal sentiment stats CSVs."""

from .figures import (
    KINDS,
    EmptyDataError,
    FigureError,
    FigureSpec,
    MissingColumnError,
    render,
)

__version__ = "0.1.0"

"""Figure renderer for photon-budget sweep CSVs."""

from .io import SchemaError, Table, load_table
from .render import FIGURES, REQUIRED_COLUMNS, render

__version__ = "0.1.0"

__all__ = [
    "SchemaError",
    "Table",
    "load_table",
    "FIGURES",
    "REQUIRED_COLUMNS",
    "render",
    "__version__",
]

"""Figure regeneration for feegame sweep results."""

from .render import EXPECTED_HEADER, FigureSpec, SchemaError, load_rows, render

__version__ = "0.1.0"

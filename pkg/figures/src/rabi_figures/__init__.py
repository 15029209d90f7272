"""Figure regeneration from the solver CLI's CSV artifacts.

This package never imports solver code; its only coupling to the
simulation side is the documented CSV/JSON schemas.
"""

from .common import FigureSpec, SchemaError, load_columns

__all__ = ["FigureSpec", "SchemaError", "load_columns"]

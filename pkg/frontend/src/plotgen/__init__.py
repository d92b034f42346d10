"""Figure renderer for cbs-sim CSV outputs.

Consumes only the public CSV contract ('#'-prefixed JSON metadata header,
comma-separated columns); figures are described by committed JSON recipes.
"""
from .render import FigureRecipe, PlotgenError, available_figures, load_recipe, render

__version__ = "0.1.0"

__all__ = [
    "FigureRecipe",
    "PlotgenError",
    "available_figures",
    "load_recipe",
    "render",
    "__version__",
]

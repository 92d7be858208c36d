"""Figure rendering for markovlab CSV artifacts.

This package is a pure consumer of the CSV files written by the
``markovlab`` command line tool; it recomputes no numerics.
"""

from .render import KINDS, PlotSpec, render

__version__ = "0.1.0"
__all__ = ["KINDS", "PlotSpec", "render", "__version__"]

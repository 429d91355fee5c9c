"""Incidence coloring toolkit."""

from incicolor.graphs import Graph, GraphError, GraphFamily

__version__ = "0.1.0"

__all__ = ["Graph", "GraphError", "GraphFamily", "__version__"]

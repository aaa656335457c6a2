"""Exact solving, enumeration, and structure analysis for degree-constrained
spanning subgraphs of bipartite graphs, plus the edge-and-triangle cover
reduction for general graphs."""

__version__ = "0.1.0"

"""Executable hardness constructions for Max k-Colorable Subgraph."""
from .graph import BudgetExceeded, Coloring, ScoreReport, WeightedGraph, score

__version__ = "0.1.0"

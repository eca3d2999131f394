"""Correspondence-coloring toolkit.

Simple graphs with correspondence assignments (per-vertex color lists plus
per-edge conflict matchings), exact solvers and samplers, constructive
colorers for a family of reducible configurations, a sparse-dense
decomposition with validation, and a resampling-based probabilistic coloring
pipeline with its numeric inequality audit.
"""

from .errors import (
    BudgetExceededError,
    CorrColorError,
    HypothesisViolation,
    InputError,
    InternalColorerError,
)
from .graph import Graph, build_graph
from .assignment import CorrespondenceAssignment, identity_assignment

__all__ = [
    "Graph",
    "build_graph",
    "CorrespondenceAssignment",
    "identity_assignment",
    "CorrColorError",
    "InputError",
    "BudgetExceededError",
    "HypothesisViolation",
    "InternalColorerError",
]

__version__ = "0.1.0"

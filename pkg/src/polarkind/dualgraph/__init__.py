"""Dual graphs of plane curve resolutions, the kind predicate, the chi
construction, adjoint checks and ramification of graphs."""

from .graph import (
    DualGraph,
    GraphError,
    KindResult,
    NotKindError,
    Vertex,
    adjoint_branch_types,
    build_dual_graph,
    chi_graph,
    is_kind,
)

__all__ = [
    "DualGraph",
    "GraphError",
    "KindResult",
    "NotKindError",
    "Vertex",
    "adjoint_branch_types",
    "build_dual_graph",
    "chi_graph",
    "is_kind",
]

from .ramify import RamifiedGraph, ramify_graph, ramify_type, unramify_equising
from .adjoint import (
    AdjointDecomposition,
    AdjointReport,
    adjoint_report,
    decompose_adjoint,
    is_perfect_adjoint,
    is_strict_adjoint,
)

__all__ += [
    "RamifiedGraph",
    "ramify_graph",
    "ramify_type",
    "unramify_equising",
    "AdjointDecomposition",
    "AdjointReport",
    "adjoint_report",
    "decompose_adjoint",
    "is_perfect_adjoint",
    "is_strict_adjoint",
]

"""Newton polygons, Newton-Puiseux expansion and equisingularity data of plane germs."""

from .polygon import NewtonPolygon, polygon_from_points
from .tree import ExpansionError, InsufficientTruncation, expand_tree
from .series import (
    BranchType,
    EquisType,
    InconsistentTypeError,
    PuiseuxBranch,
    branch_type,
    coincidence,
    equisingularity_type,
    intersection_multiplicity,
    semigroup_generators,
)
from .cluster import Divisor, ClusterPoint, Resolution, infinitely_near_multiplicities, representative_series, resolve
from .germ import (
    BivariateGerm,
    LabeledType,
    TruncationPolicy,
    joint_equisingularity,
    germ_equisingularity,
    newton_polygon,
    parse_germ,
    puiseux_expand,
)

__all__ = [
    "NewtonPolygon",
    "polygon_from_points",
    "ExpansionError",
    "InsufficientTruncation",
    "expand_tree",
    "BranchType",
    "EquisType",
    "InconsistentTypeError",
    "PuiseuxBranch",
    "branch_type",
    "coincidence",
    "equisingularity_type",
    "intersection_multiplicity",
    "semigroup_generators",
    "Divisor",
    "ClusterPoint",
    "Resolution",
    "infinitely_near_multiplicities",
    "representative_series",
    "resolve",
    "BivariateGerm",
    "LabeledType",
    "TruncationPolicy",
    "joint_equisingularity",
    "germ_equisingularity",
    "newton_polygon",
    "parse_germ",
    "puiseux_expand",
]

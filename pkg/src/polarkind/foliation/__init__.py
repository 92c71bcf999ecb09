"""1-forms at the origin of C^2: polar curves, Newton polygons, blow-up
charts, Camacho-Sad indices and generic polar equisingularity."""

from .form import Direction, FormError, OneForm, nu0, parse_form, polar_curve, pullback_form
from .polygon import (
    BoundReport,
    FoliationPolygon,
    b_contribution_highest_vertex,
    finiteness_region,
    foliation_polygon,
    polar_polygon_bound,
)
from .blowup import (
    BlowupData,
    blowup_chain,
    blowup_form,
    camacho_sad_index,
    cs_index_elem,
    divisor_index_at,
    residue_at,
)
from .charts import ChartVertex, chart_vertices, pull_curve, ramification_order, ramified_components
from .polar import (
    GStarReport,
    PolarResult,
    SamplingError,
    SamplingPolicy,
    generic_polar_equisingularity,
    gstar_check,
    is_resolved_by,
    sample_directions,
)

__all__ = [
    "Direction",
    "FormError",
    "OneForm",
    "nu0",
    "parse_form",
    "polar_curve",
    "pullback_form",
    "BoundReport",
    "FoliationPolygon",
    "b_contribution_highest_vertex",
    "finiteness_region",
    "foliation_polygon",
    "polar_polygon_bound",
    "BlowupData",
    "blowup_chain",
    "blowup_form",
    "camacho_sad_index",
    "cs_index_elem",
    "divisor_index_at",
    "residue_at",
    "ChartVertex",
    "chart_vertices",
    "pull_curve",
    "ramification_order",
    "ramified_components",
    "GStarReport",
    "PolarResult",
    "SamplingError",
    "SamplingPolicy",
    "generic_polar_equisingularity",
    "gstar_check",
    "is_resolved_by",
    "sample_directions",
]

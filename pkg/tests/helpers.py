"""Small constructors shared by the test modules."""

from polarkind.dualgraph import build_dual_graph
from polarkind.numfield import parse_polys
from polarkind.puiseux import BivariateGerm, joint_equisingularity


def polys(*texts, field=None):
    return parse_polys(list(texts), field=field)


def poly(text, field=None):
    return parse_polys([text], field=field)[0]


def product(parts):
    out = parts[0]
    for p in parts[1:]:
        out = out * p
    return out


def union_type(*curves):
    """Joint labelled type of ``(label, text)`` pairs, parsed over one field."""
    ps = parse_polys([t for _, t in curves])
    return joint_equisingularity([(l, BivariateGerm.from_poly(p)) for (l, _), p in zip(curves, ps)])


def graph_of(*texts):
    ps = parse_polys(list(texts))
    return build_dual_graph(joint_equisingularity([("C", BivariateGerm.from_poly(p)) for p in ps]))

"""Resolution charts of a curve whose branches are smooth series ``y = eta(x)``.

Every divisor of the minimal resolution of such a curve is reached by a chart
``y = eps(x) + x^p t`` where ``eps`` is the common part of degree ``< p`` of
the branches through it.  The branches meet the divisor ``x = 0`` of that
chart at the points ``t = c``, ``c`` the coefficient of ``x^p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..numfield.field import NFElem
from ..numfield.poly import Poly2
from ..puiseux.germ import TruncationPolicy, labeled_expand
from ..puiseux.series import PuiseuxBranch

__all__ = [
    "ChartVertex",
    "chart_vertices",
    "ramified_components",
    "pull_curve",
    "ramification_order",
]


def pull_curve(P: Poly2, n: int) -> Poly2:
    """``P(u^n, v)`` written in ``x, y``."""
    return Poly2(P.field, {(n * i, j): c for (i, j), c in P.terms.items()})


def ramification_order(parts: Sequence[Poly2]) -> int:
    """Smallest ``n`` making every branch of ``prod(parts)`` smooth after ``x = u^n``."""
    L = 1
    for owner, b in labeled_expand(list(parts)):
        L = L * b.n // math.gcd(L, b.n)
    return L


def ramified_components(parts: Sequence[Poly2], n: int,
                        policy: Optional[TruncationPolicy] = None) -> List[Tuple[int, PuiseuxBranch]]:
    """Smooth branches ``v = eta(u)`` of ``rho^{-1}(prod parts)`` with their owning part."""
    comps = labeled_expand([pull_curve(P, n) for P in parts], policy)
    for _, b in comps:
        if b.n != 1:
            raise ValueError(f"x = u^{n} does not make every branch smooth")
    return comps


@dataclass
class ChartVertex:
    """A divisor reached by ``y = eps(x) + x^p t``.

    ``points`` lists the distinct values ``c`` with the indices of the branches
    through ``t = c``; a point with two or more branches is the corner with a
    child divisor, a point with one branch carries its arrow.
    """

    id: int
    p: int
    prefix: Dict[int, NFElem]
    members: List[int]
    points: List[Tuple[NFElem, List[int]]]
    parent: Optional[int] = None
    children: Dict[int, int] = field(default_factory=dict)  # point index -> child vertex id

    @property
    def b(self) -> int:
        return len(self.points)

    def corner_points(self) -> List[int]:
        return [k for k, (_, ms) in enumerate(self.points) if len(ms) >= 2]


def _coef(b: PuiseuxBranch, k: int) -> NFElem:
    return b.coefficient(k)


def chart_vertices(branches: Sequence[PuiseuxBranch]) -> List[ChartVertex]:
    """All divisors of the minimal resolution of a union of smooth branches.

    Vertices come in breadth-first order from the first blow-up (``p = 1``).
    A single smooth branch needs no blow-up and yields no vertex.
    """
    r = len(branches)
    for b in branches:
        if b.n != 1:
            raise ValueError("chart vertices need smooth branches")
    if r < 2:
        return []
    out: List[ChartVertex] = []
    queue: List[Tuple[int, Dict[int, NFElem], List[int], Optional[int], Optional[int]]] = [(1, {}, list(range(r)), None, None)]
    while queue:
        p, prefix, members, parent, pidx = queue.pop(0)
        pts: List[Tuple[NFElem, List[int]]] = []
        for i in members:
            c = _coef(branches[i], p)
            for k, (c0, ms) in enumerate(pts):
                if c0 == c:
                    ms.append(i)
                    break
            else:
                pts.append((c, [i]))
        V = ChartVertex(len(out), p, dict(prefix), list(members), pts, parent)
        out.append(V)
        if parent is not None:
            out[parent].children[pidx] = V.id
        for k, (c, ms) in enumerate(pts):
            if len(ms) >= 2:
                new_prefix = dict(prefix)
                if not c.is_zero():
                    new_prefix[p] = c
                queue.append((p + 1, new_prefix, ms, V.id, k))
    return out

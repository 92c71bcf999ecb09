"""Newton polygon of a foliation, the polar bound and the finiteness region."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from ..puiseux.polygon import NewtonPolygon, polygon_from_points
from .form import Direction, OneForm, polar_curve

__all__ = [
    "FoliationPolygon",
    "foliation_polygon",
    "BoundReport",
    "polar_polygon_bound",
    "b_contribution_highest_vertex",
    "finiteness_region",
]


@dataclass(frozen=True)
class FoliationPolygon:
    """Newton polygon of the ideal ``(xA, yB)`` with per-point contributions.

    ``contributions`` maps each point of ``Delta(omega)`` to the subset of
    ``{"A", "B"}`` it comes from (``A`` through ``x A``, ``B`` through ``y B``).
    """

    polygon: NewtonPolygon
    contributions: Dict[Tuple[int, int], frozenset]

    @property
    def vertices(self):
        return self.polygon.vertices

    @property
    def sides(self):
        return self.polygon.sides

    def has_B(self, pt: Tuple[int, int]) -> bool:
        return "B" in self.contributions.get(pt, ())

    def has_A(self, pt: Tuple[int, int]) -> bool:
        return "A" in self.contributions.get(pt, ())

    def __str__(self):
        tags = ", ".join(f"({i},{j}):{''.join(sorted(self.contributions[(i, j)]))}" for i, j in self.vertices)
        return f"{self.polygon}; vertex contributions {tags}"


def delta(w: OneForm) -> Dict[Tuple[int, int], frozenset]:
    """``Delta(omega) = Delta(xA) u Delta(yB)`` with the origin of each point."""
    out: Dict[Tuple[int, int], set] = {}
    for a, b in w.A.terms:
        out.setdefault((a + 1, b), set()).add("A")
    for a, b in w.B.terms:
        out.setdefault((a, b + 1), set()).add("B")
    return {k: frozenset(v) for k, v in out.items()}


def foliation_polygon(w: OneForm) -> FoliationPolygon:
    d = delta(w)
    return FoliationPolygon(polygon_from_points(d.keys()), d)


@dataclass
class BoundReport:
    """Outcome of the polar Newton polygon bound, side by side."""

    direction: Direction
    checked_sides: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    violations: List[Tuple[str, Tuple[Fraction, Fraction], Tuple[int, int]]] = field(default_factory=list)
    tight: List[Tuple[Tuple[Fraction, Fraction], Tuple[int, int]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return f"polar bound holds on {len(self.checked_sides)} side(s)"
        return "violations: " + "; ".join(f"{w} at {pt} for side mu={s[0]}" for w, s, pt in self.violations)


def polar_polygon_bound(w: OneForm, d: Direction, side: Optional[int] = None) -> BoundReport:
    """Check ``N(Gamma) in {i + mu j >= k - mu}`` for sides with ``mu >= 1``.

    For ``mu > 1`` the supports of ``B`` and ``A`` are checked against
    ``>= k - mu`` and ``> k - mu`` respectively.  Every offending lattice
    point is reported.
    """
    P = foliation_polygon(w)
    gamma = polar_curve(w, d).poly
    rep = BoundReport(d)
    sides = list(enumerate(P.sides)) if side is None else [(side, P.sides[side])]
    for _, (mu, k) in sides:
        if mu < 1:
            continue
        rep.checked_sides.append((mu, k))
        bound = k - mu
        for pt in gamma.terms:
            val = pt[0] + mu * pt[1]
            if val < bound:
                rep.violations.append(("polar", (mu, k), pt))
            elif val == bound:
                rep.tight.append(((mu, k), pt))
        if mu > 1:
            for pt in w.B.terms:
                if pt[0] + mu * pt[1] < bound:
                    rep.violations.append(("B", (mu, k), pt))
            for pt in w.A.terms:
                if pt[0] + mu * pt[1] <= bound:
                    rep.violations.append(("A", (mu, k), pt))
    return rep


def b_contribution_highest_vertex(w: OneForm, side: int) -> bool:
    """Whether ``B`` contributes to the highest vertex of the given side."""
    P = foliation_polygon(w)
    if not P.sides and side == 0:
        # a single vertex: it is its own highest vertex
        return P.has_B(P.vertices[0])
    if not 0 <= side < len(P.sides):
        raise IndexError(f"the foliation polygon has {len(P.sides)} side(s)")
    return P.has_B(P.vertices[side])


def finiteness_region(mu, k, l1: int, h1: int) -> Set[int]:
    """Integers ``p`` for which a segment of slope ``-1/p`` fits the constraints.

    The segment ends at ``(k-1, 0)`` and its other lattice end ``(i, j)``
    satisfies ``1 <= j <= h1-1``, ``i >= 0``, ``i + mu j >= k - mu`` and
    ``i + s j <= k - 1`` with ``s = (k - l1 - 1)/(h1 - 1)``.  The last side of
    the polygon joins ``(l1, h1)`` to ``(k, 0)``.
    """
    mu, k = Fraction(mu), Fraction(k)
    if mu < 1:
        raise ValueError("the region is defined for inclinations mu >= 1")
    if h1 < 2:
        raise ValueError("the side must have height at least 2")
    if k.denominator != 1 or l1 + mu * h1 != k or l1 < 0:
        raise ValueError(f"({l1},{h1}) and ({k},0) do not span a side of inclination {mu}")
    s = Fraction(int(k) - l1 - 1, h1 - 1)
    out: Set[int] = set()
    top = int(k)
    for p in range(1, top + 1):
        for j in range(1, h1):
            i = k - 1 - p * j
            if i < 0:
                break
            if i + mu * j >= k - mu and i + s * j <= k - 1:
                out.add(p)
                break
    for p in out:
        if not (mu <= p < 2 * mu):
            raise AssertionError(f"p={p} lies outside [mu, 2mu)")
    return out

"""Newton polygons of bivariate germs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Tuple

__all__ = ["NewtonPolygon", "polygon_from_points"]


@dataclass(frozen=True)
class NewtonPolygon:
    """Compact faces of the lower-left convex hull of ``support + R^2_{>=0}``.

    ``vertices`` run from the highest point (smallest ``i``) down to the lowest
    one; each side ``(mu, k)`` lies on the line ``i + mu*j = k``.
    """

    vertices: Tuple[Tuple[int, int], ...]
    sides: Tuple[Tuple[Fraction, Fraction], ...] = field(default=())

    def side_points(self, s: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return self.vertices[s], self.vertices[s + 1]

    def height(self) -> int:
        return self.vertices[0][1] - self.vertices[-1][1]

    def contains(self, i, j) -> bool:
        """True when ``(i, j)`` lies in ``polygon + R^2_{>=0}``."""
        top, bottom = self.vertices[0], self.vertices[-1]
        if i < top[0] or j < bottom[1]:
            return False
        return all(i + mu * j >= k for mu, k in self.sides)

    def __str__(self):
        vs = ", ".join(f"({a},{b})" for a, b in self.vertices)
        ss = "; ".join(f"mu={mu}, k={k}" for mu, k in self.sides)
        return f"vertices {vs}" + (f"; sides {ss}" if ss else "")


def polygon_from_points(points: Iterable[Tuple[int, int]]) -> NewtonPolygon:
    pts = set(points)
    if not pts:
        raise ValueError("empty support has no Newton polygon")
    # reduce to the minimal i for each j
    best = {}
    for i, j in pts:
        if j not in best or i < best[j]:
            best[j] = i
    imin = min(best.values())
    start_j = min(j for j, i in best.items() if i == imin)
    cur = (imin, start_j)
    verts = [cur]
    sides = []
    while True:
        a, b = cur
        cands = [(i, j) for j, i in best.items() if j < b]
        if not cands:
            break
        # smallest inclination, ties broken by the lowest point
        mu_best, nxt = None, None
        for i, j in cands:
            mu = Fraction(i - a, b - j)
            if mu_best is None or mu < mu_best or (mu == mu_best and j < nxt[1]):
                mu_best, nxt = mu, (i, j)
        if mu_best < 0:
            # points to the lower-left cannot occur once imin is chosen
            raise AssertionError("polygon construction failed")
        if mu_best == 0:
            # horizontal drop: same i, lower j -> vertex replaces current
            verts[-1] = nxt
            cur = nxt
            continue
        sides.append((mu_best, a + mu_best * b))
        verts.append(nxt)
        cur = nxt
    return NewtonPolygon(tuple(verts), tuple(sides))

"""Strict and perfect adjoints and their decomposition along bifurcation divisors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..puiseux.cluster import resolve
from ..puiseux.germ import LabeledType
from .graph import DualGraph, build_dual_graph, graph_from_resolution
from .ramify import ramify_type

__all__ = [
    "AdjointDecomposition",
    "decompose_adjoint",
    "is_strict_adjoint",
    "is_perfect_adjoint",
    "AdjointReport",
    "adjoint_report",
]


@dataclass
class AdjointDecomposition:
    """Assignment of adjoint branches to bifurcation divisors of ``G(C)``.

    ``budget`` maps each bifurcation divisor to ``(expected, actual)``
    multiplicities of its part of the adjoint.
    """

    assignment: Dict[int, List[str]]
    residual: List[str]
    budget: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.residual and all(a == b for a, b in self.budget.values())


def expected_budget(g: DualGraph, E: int) -> int:
    X = g.vertices[E]
    full = X.n_under * X.n_E * (X.b - 1)
    return full - X.n_under if g.dead_arc_at(E) is not None else full


def decompose_adjoint(zc: LabeledType, g: Optional[DualGraph] = None, curve: str = "C") -> AdjointDecomposition:
    """Split the non-``curve`` branches of ``zc`` into the parts ``Z^E``.

    A branch ``zeta`` goes to the bifurcation divisor ``E`` with
    ``C(C_i, zeta) = v(E)`` for every ``C_i`` whose geodesic passes through
    ``E``, and ``C(C_j, zeta) = C(C_j, C_i)`` for the other branches.
    """
    cidx = zc.indices(curve)
    zidx = [k for k in range(zc.etype.r) if k not in cidx]
    if g is None:
        g = build_dual_graph(zc.part(curve))
    label_of = {k: zc.labels[k] for k in range(zc.etype.r)}
    e = zc.etype
    assignment: Dict[int, List[str]] = {E: [] for E in g.bifurcations()}
    residual: List[str] = []
    for z in zidx:
        cs = {i: e.coinc(i, z) for i in cidx}
        istar = max(cidx, key=lambda i: (cs[i], -i))
        cstar = cs[istar]
        geo = g.geodesics[label_of[istar]]
        cands = [E for E in geo if g.vertices[E].v == cstar and g.vertices[E].b >= 2]
        target = None
        for E in cands:
            ok = True
            for i in cidx:
                if E in g.geodesics[label_of[i]]:
                    ok = cs[i] == g.vertices[E].v
                else:
                    ok = cs[i] == e.coinc(i, istar)
                if not ok:
                    break
            if ok:
                target = E
                break
        if target is None:
            residual.append(label_of[z])
        else:
            assignment[target].append(label_of[z])
    budget = {}
    for E, zs in assignment.items():
        actual = sum(e.branches[zc.labels.index(l)].multiplicity for l in zs)
        budget[E] = (expected_budget(g, E), actual)
    return AdjointDecomposition(assignment, residual, budget)


@dataclass
class AdjointReport:
    strict: bool
    perfect: bool
    reasons: List[str]
    graph: DualGraph  # graph of the pulled-back curve


def _ramification_order(lt: LabeledType, curve: str) -> int:
    L = 1
    for k in lt.indices(curve):
        m = lt.etype.branches[k].multiplicity
        L = L * m // math.gcd(L, m)
    return L


def adjoint_report(zc: LabeledType, n: Optional[int] = None, curve: str = "C") -> AdjointReport:
    """Check strict and perfect adjointness of ``Z`` for ``C`` after ``x = u^n``.

    ``zc`` is the labelled type of ``Z u C``; ``n`` defaults to the lcm of the
    multiplicities of the branches of ``C`` (the smallest order making the
    pull-back of ``C`` smooth).
    """
    if n is None:
        n = _ramification_order(zc, curve)
    if n % _ramification_order(zc, curve):
        raise ValueError(f"x = u^{n} does not make the pull-back of {curve} smooth")
    rlt, _ = ramify_type(zc, n)
    active = rlt.indices(curve)
    res = resolve(rlt.etype, active=active)
    labels_c = [rlt.labels[i] for i in active]
    types = {rlt.labels[i]: rlt.etype.branches[i] for i in active}
    # graph of the pulled-back curve alone, vertices numbered as in the resolution
    pos = {b: k for k, b in enumerate(active)}
    sub_arrows = type(res)(res.divisors, res.edges, {pos[b]: E for b, E in res.arrows.items()},
                           res.points, {}, rlt.etype.restrict(active))
    G = graph_from_resolution(sub_arrows, labels_c, types)
    reasons: List[str] = []
    for pt in res.points:
        mc = pt.multiplicity
        mz = sum(pt.passive_mult.values())
        if mz != mc - 1:
            reasons.append(f"point p{pt.id} (level {pt.level}): m(Z)={mz} but m(C)-1={mc - 1}")
    exits = res.passive_final
    for b, ex in sorted(exits.items()):
        if ex.at_corner:
            reasons.append(f"{rlt.labels[b]} passes through the corner of E{ex.on_divisors[0]} and E{ex.on_divisors[1]}")
        if ex.meets:
            reasons.append(f"{rlt.labels[b]} meets the strict transform of {curve} on E{ex.divisor}")
    strict = not reasons
    perfect = strict
    if strict:
        per_div: Dict[int, List] = {}
        for b, ex in exits.items():
            per_div.setdefault(ex.divisor, []).append(ex)
        for E, X in G.vertices.items():
            exs = per_div.get(E, [])
            pts = {ex.point for ex in exs}
            if len(pts) != len(exs):
                reasons.append(f"two branches of Z meet E{E} at the same point")
            if any(ex.divisor_intersection != 1 for ex in exs):
                reasons.append(f"a branch of Z is not transverse to E{E}")
            if len(exs) != max(X.b - 1, 0):
                reasons.append(f"Z meets E{E} in {len(exs)} points, b-1 = {X.b - 1}")
        perfect = not reasons
    return AdjointReport(strict, perfect, reasons, G)


def is_strict_adjoint(zc: LabeledType, n: Optional[int] = None, curve: str = "C") -> bool:
    """``m_p(Z) = m_p(C) - 1`` at every infinitely near point of the pulled-back
    curve, and the pulled-back ``Z`` avoids the corners of its resolution."""
    return adjoint_report(zc, n, curve).strict


def is_perfect_adjoint(zc: LabeledType, n: Optional[int] = None, curve: str = "C") -> bool:
    """Strict, and ``Z`` meets each divisor ``E`` in exactly ``b_E - 1`` free points."""
    return adjoint_report(zc, n, curve).perfect

"""Pull-back of curves and dual graphs by the ramification ``x = u^n``."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..puiseux.germ import LabeledType
from ..puiseux.series import (
    BranchType,
    EquisType,
    InconsistentTypeError,
    PuiseuxBranch,
    _common_field,
    _twist_equal,
    coincidence,
)
from .graph import DualGraph, _as_labeled, build_dual_graph

__all__ = ["ramify_type", "ramify_graph", "unramify_equising", "RamifiedGraph"]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _pulled_type(t: BranchType, n: int) -> BranchType:
    """Type of each component of the pull-back of a branch of type ``t``."""
    g = math.gcd(n, t.multiplicity)
    m = t.multiplicity // g
    beta = [m]
    den = 1
    for q in t.exponents_as_fractions():
        q2 = q * n
        new = _lcm(den, q2.denominator)
        if new > den:
            beta.append(int(q2 * m))
            den = new
    if den != m:
        raise AssertionError("pull-back multiplicity mismatch")
    return BranchType(tuple(beta))


def _first_split(fr: Sequence[Fraction], k: int, l: int, c) -> Fraction:
    """Coincidence of the conjugates ``k`` and ``l`` of two branches that agree
    (as series) up to ``c``; twists act on ``x^q`` by ``exp(2 pi i k q)``."""
    best = c
    for q in fr:
        if q >= best:
            break
        if ((k - l) * q).denominator != 1:
            return q
    return best


def ramify_type(e: Union[EquisType, LabeledType], n: int) -> Tuple[LabeledType, List[Tuple[int, int]]]:
    """EquisType of ``rho^{-1} C`` for ``rho(u, v) = (u^n, v)``.

    Branch ``i`` of multiplicity ``n_i`` pulls back to ``gcd(n, n_i)``
    components labelled ``<label>.<k>``.  Coincidences are read from the
    root-of-unity twists of the conjugate series, so the result is exact.
    Returns the labelled type and the ``(i, k)`` origin of each component.
    """
    if n < 1:
        raise ValueError("ramification order must be positive")
    lt = _as_labeled(e)
    E = lt.etype
    comps: List[Tuple[int, int]] = []
    types: List[BranchType] = []
    labels: List[str] = []
    for i, t in enumerate(E.branches):
        g = math.gcd(n, t.multiplicity)
        pt = _pulled_type(t, n)
        for k in range(g):
            comps.append((i, k))
            types.append(pt)
            labels.append(f"{lt.labels[i]}.{k}")
    fracs = [t.exponents_as_fractions() for t in E.branches]
    r = len(comps)
    mat: List[List[Optional[Fraction]]] = [[None] * r for _ in range(r)]
    for a, b in combinations(range(r), 2):
        (i, k), (j, l) = comps[a], comps[b]
        ni, nj = E.branches[i].multiplicity, E.branches[j].multiplicity
        gi, gj = math.gcd(n, ni), math.gcd(n, nj)
        c = Fraction(10**9) if i == j else E.coinc(i, j)
        best = None
        # conjugates of component (i, k) are the twists k + gi*s of branch i
        for kk in range(k, ni, gi):
            for ll in range(l, nj, gj):
                if i == j and kk == ll:
                    continue
                v = _first_split(fracs[i], kk, ll, c)
                if best is None or v > best:
                    best = v
        mat[a][b] = mat[b][a] = best * n
    return LabeledType(EquisType(types, mat), labels), comps


class RamifiedGraph:
    """Graph of ``rho^{-1} C`` with the vertices associated to those of ``G(C)``."""

    def __init__(self, base: DualGraph, graph: DualGraph, n: int, association: Dict[int, List[int]],
                 labeled: LabeledType):
        self.base = base
        self.graph = graph
        self.n = n
        self.association = association
        self.labeled = labeled

    def expected_b(self, E: int) -> int:
        """``b`` the associated vertices must have, from the data of ``E``."""
        X = self.base.vertices[E]
        if E == self.base.root and not X.is_puiseux:
            return X.b
        if not X.is_puiseux:
            return X.b
        if self.base.dead_arc_at(E) is not None:
            return (X.b - 1) * X.n_E
        return (X.b - 1) * X.n_E + 1


def ramify_graph(e: Union[EquisType, LabeledType], n: int) -> RamifiedGraph:
    """Dual graph of the pull-back by ``x = u^n`` and the association map.

    ``n`` must be a multiple of every branch multiplicity, so that the
    pull-back is a union of smooth branches.  Each bifurcation divisor ``E`` of
    ``G(C)`` (and the first divisor) is associated with the vertices ``E~`` of
    the new graph with ``v(E~) = n v(E)`` lying on geodesics of components of
    branches through ``E``.
    """
    lt = _as_labeled(e)
    L = 1
    for t in lt.etype.branches:
        L = _lcm(L, t.multiplicity)
    if n % L:
        raise ValueError(f"ramification order {n} is not a multiple of the branch multiplicities (lcm {L})")
    base = build_dual_graph(lt)
    rlt, comps = ramify_type(lt, n)
    G = build_dual_graph(rlt)
    assoc: Dict[int, List[int]] = {}
    wanted = set(base.bifurcations()) | {base.root}
    for E in sorted(wanted):
        target = n * base.vertices[E].v
        branches = set(base.I.get(E, []))
        found = set()
        for lab, (i, _) in zip(rlt.labels, comps):
            if lt.labels[i] not in branches:
                continue
            for Et in G.geodesics[lab]:
                if G.vertices[Et].v == target:
                    found.add(Et)
        assoc[E] = sorted(found)
    return RamifiedGraph(base, G, n, assoc, rlt)


# ---------------------------------------------------------------------------
# unramification
# ---------------------------------------------------------------------------


def _twist_index(a: PuiseuxBranch, b: PuiseuxBranch, n: int) -> Optional[int]:
    """``j`` with ``a_s = zeta_n^(j s) b_s`` for all known ``s`` (None if no twist)."""
    G = _common_field(a.field, b.field)
    top = min(a.trunc_s, b.trunc_s)
    exps = sorted(s for s in set(a.terms) | set(b.terms) if s <= top)
    for j in range(n):
        ok = True
        for s in exps:
            eq = _twist_equal(a.coefficient(s), b.coefficient(s), j * s, n, G)
            if not eq:
                ok = False
                break
        if ok:
            return j
    return None


def unramify_equising(branches: Sequence[PuiseuxBranch], n: int) -> EquisType:
    """EquisType of ``C`` from the smooth branches ``v = sum a_s u^s`` of ``rho^{-1} C``.

    Branches lying in one orbit of ``u -> zeta u`` (``zeta^n = 1``) come from
    the same branch of ``C``; the orbit size is its multiplicity.
    """
    for b in branches:
        if b.n != 1:
            raise ValueError("pulled-back branches must be smooth series in u")
    classes: List[List[int]] = []
    for i, b in enumerate(branches):
        for cl in classes:
            if _twist_index(b, branches[cl[0]], n) is not None:
                cl.append(i)
                break
        else:
            classes.append([i])
    types: List[BranchType] = []
    for cl in classes:
        ni = len(cl)
        if n % ni:
            raise InconsistentTypeError(f"class of size {ni} is incompatible with ramification order {n}")
        vals = set()
        for a, b in combinations(cl, 2):
            c = coincidence(branches[a], branches[b]) * ni / n
            if c.denominator != 1:
                raise InconsistentTypeError("intra-class coincidence does not give an integer exponent")
            vals.add(int(c))
        types.append(BranchType(tuple([ni] + sorted(vals))))
    r = len(classes)
    mat = [[None] * r for _ in range(r)]
    for x, y in combinations(range(r), 2):
        best = max(coincidence(branches[a], branches[b]) for a in classes[x] for b in classes[y])
        mat[x][y] = mat[y][x] = best / n
    return EquisType(types, mat)

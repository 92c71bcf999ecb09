"""Bivariate germs and their Newton-Puiseux data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from ..numfield.field import NFElem, NumberField
from ..numfield.poly import Poly2, parse_polys
from ..numfield.scalar import Scalar
from .polygon import NewtonPolygon, polygon_from_points
from .series import (
    EquisType,
    BranchType,
    PuiseuxBranch,
    branch_type,
    coincidence,
    newton_lift,
)
from .tree import ExpansionError, ExpansionTree, InsufficientTruncation, Node, expand_tree

__all__ = [
    "BivariateGerm",
    "TruncationPolicy",
    "parse_germ",
    "newton_polygon",
    "puiseux_expand",
    "germ_equisingularity",
    "complex_branch_data",
    "LabeledType",
    "joint_equisingularity",
    "labeled_expand",
]

INF = math.inf


@dataclass
class BivariateGerm:
    """A germ ``f = sum f_ij x^i y^j`` with a trust bound on total degree.

    ``truncated`` marks series input: coefficients of total degree above
    ``truncation_degree`` are unknown rather than zero.
    """

    poly: Poly2
    truncation_degree: int
    truncated: bool = False

    def __post_init__(self):
        top = self.poly.total_degree()
        if not self.truncated and self.truncation_degree < top:
            self.truncation_degree = top
        if self.truncated:
            self.poly = self.poly.truncate(self.truncation_degree)

    @classmethod
    def from_poly(cls, p: Poly2, truncation_degree: Optional[int] = None) -> "BivariateGerm":
        if truncation_degree is None:
            return cls(p, max(p.total_degree(), 0), False)
        return cls(p, truncation_degree, True)

    @property
    def field(self) -> NumberField:
        return self.poly.field

    @property
    def coefficients(self) -> Dict[Tuple[int, int], Scalar]:
        return {k: Scalar.from_elem(v) for k, v in sorted(self.poly.terms.items())}

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def order(self) -> int:
        return self.poly.order()

    def __mul__(self, other: "BivariateGerm") -> "BivariateGerm":
        p = self.poly * other.poly
        if self.truncated or other.truncated:
            d = min(self.truncation_degree + other.order(), other.truncation_degree + self.order())
            return BivariateGerm(p, d, True)
        return BivariateGerm(p, p.total_degree(), False)

    def __str__(self):
        s = self.poly.to_str()
        return s + (f" + O({self.truncation_degree + 1})" if self.truncated else "")


def parse_germ(text: str, truncation_degree: Optional[int] = None, field: Optional[NumberField] = None) -> BivariateGerm:
    """Parse ``sum c * x^i * y^j`` text into a germ (exact unless a truncation is given)."""
    (p,) = parse_polys([text], field=field)
    if truncation_degree is None:
        return BivariateGerm(p, max(p.total_degree(), 0), False)
    return BivariateGerm(p, truncation_degree, True)


def newton_polygon(g) -> NewtonPolygon:
    """Newton polygon of a germ (or of a raw :class:`Poly2`)."""
    p = g.poly if isinstance(g, BivariateGerm) else g
    if p.is_zero():
        raise ExpansionError("the zero germ has no Newton polygon")
    return polygon_from_points(p.terms.keys())


@dataclass
class TruncationPolicy:
    """Series length control for :func:`puiseux_expand`.

    ``cap`` bounds the largest ``s`` ever computed; ``margin`` extra terms are
    added once all branch data is certified.
    """

    cap: int = 400
    margin: int = 2
    initial: int = 8


def _tree(g: BivariateGerm, mode: str) -> ExpansionTree:
    return expand_tree(g.poly, mode, truncation_degree=g.truncation_degree if g.truncated else None)


def _leaf_branch(leaf: Node, order: int, shear: int, label: str) -> PuiseuxBranch:
    F = leaf.field
    terms: Dict[int, NFElem] = {k: v for k, v in leaf.prefix.items() if not v.is_zero()}
    if leaf.kind == "exact":
        return PuiseuxBranch(leaf.R, terms, INF, F, label, shear)
    M = order if leaf.N is None else min(order, leaf.N)
    Y = newton_lift(leaf.poly, F, M)
    for k, c in enumerate(Y):
        if not c.is_zero():
            s = leaf.s + k
            terms[s] = terms[s] + c if s in terms else c
    terms = {k: v for k, v in terms.items() if not v.is_zero()}
    return PuiseuxBranch(leaf.R, terms, leaf.s + M - 1, F, label, shear)


def puiseux_expand(g: BivariateGerm, policy: Optional[TruncationPolicy] = None) -> List[PuiseuxBranch]:
    """One Puiseux series per complex branch, long enough to certify all
    characteristic exponents and pairwise coincidences."""
    policy = policy or TruncationPolicy()
    T = _tree(g, "split")
    leaves = T.leaves
    order = policy.initial
    while True:
        branches = [_leaf_branch(l, order, T.shear, f"C{i + 1}") for i, l in enumerate(leaves)]
        try:
            for b in branches:
                branch_type(b)
            for b1, b2 in combinations(branches, 2):
                coincidence(b1, b2)
        except InsufficientTruncation:
            limited = any(l.N is not None and order >= l.N for l in leaves if l.kind == "leaf")
            if limited or max((l.s for l in leaves), default=0) + order > policy.cap:
                raise
            order *= 2
            continue
        break
    if policy.margin:
        branches = [_leaf_branch(l, order + policy.margin, T.shear, f"C{i + 1}") for i, l in enumerate(leaves)]
    return branches


# ---------------------------------------------------------------------------
# exact equisingularity data from the rational (Duval) tree
# ---------------------------------------------------------------------------


@dataclass
class ComplexBranch:
    leaf: Node
    choice: Tuple[int, ...]
    path: List[Node]

    @property
    def multiplicity(self) -> int:
        return self.leaf.R

    def char_exponents(self) -> Tuple[int, ...]:
        R = self.leaf.R
        beta = [R]
        for n in self.path[1:]:
            if n.q > 1:
                beta.append(int(n.e * R))
        return tuple(beta)


def complex_branch_data(T: ExpansionTree) -> List[ComplexBranch]:
    out = []
    for leaf, choice in T.complex_branches():
        out.append(ComplexBranch(leaf, choice, leaf.path()))
    return out


def _tree_coincidence(a: ComplexBranch, b: ComplexBranch) -> Fraction:
    pa, pb = a.path[1:], b.path[1:]
    for k in range(min(len(pa), len(pb))):
        na, nb = pa[k], pb[k]
        if na is not nb:
            return min(na.e, nb.e)
        if a.choice[k] != b.choice[k]:
            return na.e
    raise AssertionError("two complex branches share their whole expansion path")


def germ_equisingularity(g: BivariateGerm) -> EquisType:
    """EquisType of the germ read off the rational Newton-Puiseux tree.

    Field degrees stay as small as the factorisation allows, so this is the
    fast route; :func:`puiseux_expand` with :func:`equisingularity_type` is the
    explicit-series route to the same answer.
    """
    T = _tree(g, "rational")
    cb = complex_branch_data(T)
    _check_counts(T)
    types = [BranchType(b.char_exponents()) for b in cb]
    r = len(cb)
    mat = [[None] * r for _ in range(r)]
    for i, j in combinations(range(r), 2):
        mat[i][j] = mat[j][i] = _tree_coincidence(cb[i], cb[j])
    return EquisType(types, mat)


def _check_counts(T: ExpansionTree) -> None:
    """Each node's Y-multiplicity must equal the total multiplicity below it."""

    for n in _walk(T.root):
        if n.children:
            tot = sum(c.d * c.q * c.mult for c in n.children)
            if tot != n.mult:
                raise AssertionError(f"branch count mismatch at node {n.label}: {tot} != {n.mult}")


def _walk(n: Node):
    yield n
    for c in n.children:
        yield from _walk(c)


# ---------------------------------------------------------------------------
# unions of curves with labelled branches
# ---------------------------------------------------------------------------


@dataclass
class LabeledType:
    """An EquisType whose branches carry labels such as ``C1`` or ``G2``.

    The label prefix (letters before the trailing digits) names the curve a
    branch belongs to; it is what decorated dual graphs use as arrow kind.
    """

    etype: EquisType
    labels: List[str]

    def __post_init__(self):
        if len(self.labels) != self.etype.r:
            raise ValueError("one label per branch is required")

    @staticmethod
    def kind_of(label: str) -> str:
        return label.rstrip("0123456789.") or label

    def indices(self, kind: str) -> List[int]:
        return [i for i, l in enumerate(self.labels) if self.kind_of(l) == kind]

    def part(self, kind: str) -> "LabeledType":
        idx = self.indices(kind)
        return LabeledType(self.etype.restrict(idx), [self.labels[i] for i in idx])

    @classmethod
    def plain(cls, e: EquisType, kind: str = "C") -> "LabeledType":
        return cls(e, [f"{kind}{i + 1}" for i in range(e.r)])

    def __str__(self):
        return f"{self.etype} labels={self.labels}"


def joint_equisingularity(parts: List[Tuple[str, BivariateGerm]]) -> LabeledType:
    """Exact EquisType of a union of curves, each branch labelled by its curve.

    ``parts`` pairs a label prefix with a germ; the union must be reduced.
    The product is expanded once with the factors tracked, so every complex
    branch is attributed to the curve it lies on.
    """
    if not parts:
        raise ValueError("empty union")
    polys = [g.poly for _, g in parts]
    if any(g.truncated for _, g in parts):
        raise ExpansionError("unions need exact polynomial germs")
    prod = polys[0]
    for p in polys[1:]:
        prod = prod * p
    T = expand_tree(prod, "rational", factors=[p.lift(prod.field) for p in polys])
    cb = complex_branch_data(T)
    _check_counts(T)
    # stable order: by part, then by tree order
    owners = [b.leaf.owner for b in cb]
    order = sorted(range(len(cb)), key=lambda k: (owners[k], k))
    cb = [cb[k] for k in order]
    owners = [owners[k] for k in order]
    labels, counters = [], {}
    for o in owners:
        prefix = parts[o][0]
        counters[prefix] = counters.get(prefix, 0) + 1
        labels.append(f"{prefix}{counters[prefix]}")
    types = [BranchType(b.char_exponents()) for b in cb]
    r = len(cb)
    mat = [[None] * r for _ in range(r)]
    for i, j in combinations(range(r), 2):
        mat[i][j] = mat[j][i] = _tree_coincidence(cb[i], cb[j])
    return LabeledType(EquisType(types, mat), labels)


def labeled_expand(parts: List[Poly2], policy: Optional[TruncationPolicy] = None,
                   allow_shear: bool = False) -> List[Tuple[int, PuiseuxBranch]]:
    """Puiseux series of every complex branch of ``prod(parts)``, each paired
    with the index of the part it lies on.

    All series are lifted to one common number field.  By default the
    coordinates are not sheared, so the series describe the given curve.
    """
    policy = policy or TruncationPolicy()
    prod = parts[0]
    for p in parts[1:]:
        prod = prod * p
    T = expand_tree(prod, "split", factors=[p.lift(prod.field) for p in parts], allow_shear=allow_shear)
    leaves = T.leaves
    F = max((l.field for l in leaves), key=lambda K: K.degree)
    order = policy.initial
    while True:
        branches = [_leaf_branch(l, order, T.shear, f"C{i + 1}") for i, l in enumerate(leaves)]
        try:
            for b in branches:
                branch_type(b)
            for b1, b2 in combinations(branches, 2):
                coincidence(b1, b2)
        except InsufficientTruncation:
            limited = any(l.N is not None and order >= l.N for l in leaves if l.kind == "leaf")
            if limited or max((l.s for l in leaves), default=0) + order > policy.cap:
                raise
            order *= 2
            continue
        break
    if policy.margin:
        branches = [_leaf_branch(l, order + policy.margin, T.shear, f"C{i + 1}") for i, l in enumerate(leaves)]
    out = []
    for leaf, b in zip(leaves, branches):
        if leaf.owner is None:
            raise ExpansionError("a branch could not be attributed to a factor")
        b = PuiseuxBranch(b.n, {k: v.lift(F) for k, v in b.terms.items()}, b.trunc_s, F, b.label, b.shear)
        out.append((leaf.owner, b))
    out.sort(key=lambda ob: ob[0])
    return out

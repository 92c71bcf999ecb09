"""Newton-Puiseux expansion trees.

Two expansion styles share the same node machinery:

``rational``
    Duval's rational Newton-Puiseux algorithm.  An irreducible factor of an
    edge polynomial is handled by adjoining one root; the complex branches
    through the resulting node are its conjugates.  Field degrees stay small,
    which makes this the engine behind equisingularity types.
``split``
    Classical Newton-Puiseux in a single growing field that contains every
    edge root and a ``q``-th root of it.  Each leaf is then exactly one complex
    branch with explicit Puiseux coefficients.

Node polynomials are ``g(T, Y)``; the original variables satisfy
``x = gamma * T^R`` and ``y = P(T) + T^s * Y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, List, Optional, Tuple

from ..numfield.field import NFElem, NumberField, factor_over, upoly_trim
from ..numfield.poly import Poly2
from .polygon import polygon_from_points

__all__ = [
    "ExpansionError",
    "InsufficientTruncation",
    "Node",
    "ExpansionTree",
    "expand_tree",
]

INF = float("inf")


class ExpansionError(ValueError):
    """The germ violates a precondition of the expansion."""


class InsufficientTruncation(ExpansionError):
    """The truncation of the input does not certify the requested data."""


@dataclass(eq=False)
class Node:
    field: NumberField
    poly: Dict[Tuple[int, int], NFElem]
    e: Fraction  # x-exponent of the term fixed on entering this node
    R: int  # ramification: x = gamma * T^R
    q: int = 1
    p: int = 0
    d: int = 1  # degree of the edge factor over the parent field
    mult: int = 0  # Y-order of poly at T = 0
    kind: str = "node"  # node | leaf | exact
    N: Optional[int] = None  # T-degree bound of trusted coefficients (None: exact)
    gamma: Optional[NFElem] = None
    s: int = 0
    prefix: Dict[int, NFElem] = field(default_factory=dict)
    parent: Optional["Node"] = None
    children: List["Node"] = field(default_factory=list)
    xi: Optional[NFElem] = None
    label: str = "r"
    tracked: Optional[List[Optional[Dict[Tuple[int, int], NFElem]]]] = None
    owner: Optional[int] = None  # index of the tracked factor a leaf belongs to

    def path(self) -> List["Node"]:
        out, n = [], self
        while n is not None:
            out.append(n)
            n = n.parent
        return out[::-1]


@dataclass
class ExpansionTree:
    root: Node
    mode: str
    shear: int  # x -> x + shear*y was applied when nonzero
    base_field: NumberField
    leaves: List[Node]

    def complex_branches(self) -> List[Tuple[Node, Tuple[int, ...]]]:
        """Enumerate complex branches as (leaf, conjugate choice per path edge)."""
        out = []
        for leaf in self.leaves:
            path = leaf.path()[1:]
            ranges = [range(n.d) for n in path]
            for choice in product(*ranges):
                out.append((leaf, tuple(choice)))
        return out


def _bezout(q: int, p: int) -> Tuple[int, int]:
    """Integers (u, v) with u*q - v*p = 1."""
    old_r, r = q, p
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    # old_s*q + old_t*p = 1
    return old_s, -old_t


def _lift_poly(poly, F):
    return {k: v.lift(F) for k, v in poly.items()}


class _Engine:
    def __init__(self, mode: str, max_depth: int = 400):
        self.mode = mode
        self.max_depth = max_depth
        self.global_field: Optional[NumberField] = None
        self.leaves: List[Node] = []
        self.counter = 0

    # ------------------------------------------------------------------
    def grow(self, F: NumberField) -> None:
        if self.global_field is None or F.is_extension_of(self.global_field):
            self.global_field = F

    def field_for(self, node: Node) -> NumberField:
        if self.mode == "split":
            return self.global_field
        return node.field

    def run(self, root: Node, root_degree_bound: Optional[int]) -> None:
        stack = [(root, root_degree_bound)]
        while stack:
            node, D = stack.pop()
            new = self.process(node, D)
            # depth-first, children in order
            for ch in reversed(new):
                stack.append((ch, None))

    # ------------------------------------------------------------------
    def process(self, node: Node, root_D: Optional[int]) -> List[Node]:
        F = self.field_for(node)
        if node.field is not F:
            node.poly = _lift_poly(node.poly, F)
            if node.tracked is not None:
                node.tracked = [None if t is None else _lift_poly(t, F) for t in node.tracked]
            node.field = F
        poly = node.poly
        if not poly:
            raise ExpansionError("polynomial vanishes identically (non-reduced or x-factor)")
        j0 = min(b for _, b in poly)
        on_axis = [b for (a, b) in poly if a == 0]
        if not on_axis:
            raise ExpansionError("x = 0 is a component of the curve")
        m = min(on_axis)
        node.mult = m
        exact_child = None
        if j0 >= 2:
            raise ExpansionError("the germ is not reduced (repeated factor)")
        if j0 == 1:
            if node.N is not None:
                raise InsufficientTruncation(
                    f"branches through node {node.label} (exponent {node.e}) are not separated at the truncation"
                )
            if m == 1:
                node.kind = "exact"
                node.owner = _axis_owner(node.tracked, 1)
                self.leaves.append(node)
                return []
            exact_child = Node(
                field=F,
                poly={},
                e=Fraction(10**9),
                R=node.R,
                q=1,
                p=0,
                d=1,
                mult=1,
                kind="exact",
                gamma=node.gamma,
                s=node.s,
                prefix=dict(node.prefix),
                parent=node,
                label=node.label + ".0",
            )
            exact_child.e = INF
            if node.tracked is not None:
                exact_child.owner = _y_divisible_owner(node.tracked)
            poly = {(a, b - 1): c for (a, b), c in poly.items()}
            m -= 1
        if m == 1 and exact_child is None:
            node.kind = "leaf"
            node.owner = _axis_owner(node.tracked, 1)
            self.leaves.append(node)
            return []
        children: List[Node] = []
        if exact_child is not None:
            node.children.append(exact_child)
            self.leaves.append(exact_child)
        if m == 0:
            return []
        pts = [(a, b) for (a, b) in poly if b <= m]
        poly_ng = polygon_from_points(pts)
        verts = poly_ng.vertices
        if verts[0] != (0, m):
            raise AssertionError("unexpected polygon start")
        a_last, b_last = verts[-1]
        if b_last != 0:
            raise InsufficientTruncation(
                f"no certified pure power of T at node {node.label} (exponent {node.e})"
            )
        if node.N is not None and a_last >= node.N:
            raise InsufficientTruncation(
                f"branches through node {node.label} (exponent {node.e}) need more terms"
            )
        if root_D is not None and (a_last > root_D or m > root_D):
            raise InsufficientTruncation("truncation degree below the Newton polygon of the germ")
        if len(node.path()) > self.max_depth:
            raise InsufficientTruncation(f"expansion depth cap reached at node {node.label}")
        for si, (mu, k) in enumerate(poly_ng.sides):
            (a1, b1), (_, b2) = verts[si], verts[si + 1]
            p, q = mu.numerator, mu.denominator
            K = q * a1 + p * b1
            edge = {}
            for (a, b), c in poly.items():
                if q * a + p * b == K:
                    edge[(b - b2) // q] = c
            deg = (b1 - b2) // q
            Phi = [edge.get(t, F.zero()) for t in range(deg + 1)]
            children.extend(self.expand_side(node, poly, p, q, K, Phi, root_D))
        node.children.extend(children)
        return children

    # ------------------------------------------------------------------
    def expand_side(self, node, poly, p, q, K, Phi, root_D) -> List[Node]:
        F = node.field
        out = []
        facs = factor_over(F, Phi)
        if self.mode == "rational":
            for fac, mult in facs:
                if len(fac) == 2:
                    L, xi = F, -fac[0]
                else:
                    L, xi = F.adjoin(fac)
                out.append(self.child(node, poly, p, q, K, L, xi, len(fac) - 1, mult, root_D))
            return out
        # split mode: put every root of Phi into the global field
        roots: List[Tuple[NFElem, int]] = []
        pending = [(fac, mult) for fac, mult in facs]
        while pending:
            fac, mult = pending.pop(0)
            G = self.global_field
            fac = [c.lift(G) for c in fac]
            if len(fac) == 2:
                roots.append((-fac[0], mult))
                continue
            L, r = G.adjoin(fac)
            self.grow(L)
            roots.append((r, mult))
            # divide out the root and refactor the cofactor over the bigger field
            quo = _deflate([c.lift(L) for c in fac], r)
            for f2, m2 in factor_over(L, quo):
                pending.append((f2, mult * m2))
        for xi, mult in roots:
            G = self.global_field
            xi = xi.lift(G)
            out.append(self.child(node, poly, p, q, K, G, xi, 1, mult, root_D))
        return out

    def child(self, node, poly, p, q, K, L, xi, d, mult, root_D) -> Node:
        self.counter += 1
        if self.mode == "rational":
            u, v = _bezout(q, p)
            alpha = xi ** v  # X = alpha T^q
            beta = xi ** u  # Y = T^p (beta + Y')
        else:
            # classical: X = T^q, Y = T^p (c + Y') with c^q = xi
            c = self.qth_root(xi, q)
            L = self.global_field
            alpha, beta = L.one(), c
        poly_L = poly if L is node.field else _lift_poly(poly, L)
        alpha, beta = L(alpha), L(beta)
        newN = None
        if node.N is not None:
            newN = q * node.N - K
        elif root_D is not None:
            newN = min(p, q) * (root_D + 1) - K
        new = _substitute(poly_L, alpha, beta, p, q, K, newN)
        tracked = None
        if node.tracked is not None:
            tracked = []
            for t in node.tracked:
                if t is None:
                    tracked.append(None)
                    continue
                tL = t if L is node.field else _lift_poly(t, L)
                Kt = min(q * a + p * b for a, b in tL)
                sub = _substitute(tL, alpha, beta, p, q, Kt, None)
                # factors whose transform is a unit at the new centre are dropped
                tracked.append(sub if any(a == 0 and b > 0 for a, b in sub) and (0, 0) not in sub else None)
        gamma = node.gamma.lift(L) if node.gamma is not None else L.one()
        if self.mode == "rational":
            gamma = gamma * alpha ** node.R
            prefix = {k * q: c.lift(L) * alpha**k for k, c in node.prefix.items()}
            s_term = alpha ** node.s * beta
        else:
            prefix = {k * q: c.lift(L) for k, c in node.prefix.items()}
            s_term = beta
        s_new = q * node.s + p
        prefix[s_new] = s_term
        ch = Node(
            field=L,
            poly=new,
            e=node.e + Fraction(p, q * node.R),
            R=node.R * q,
            q=q,
            p=p,
            d=d,
            mult=mult,
            N=newN,
            gamma=gamma,
            s=s_new,
            prefix=prefix,
            parent=node,
            xi=xi,
            label=f"{node.label}.{len(node.children) + self.counter}",
            tracked=tracked,
        )
        return ch

    def qth_root(self, xi: NFElem, q: int) -> NFElem:
        if q == 1:
            return xi
        G = self.global_field
        h = [-xi.lift(G)] + [G.zero()] * (q - 1) + [G.one()]
        facs = factor_over(G, h)
        for fac, _ in facs:
            if len(fac) == 2:
                return -fac[0]
        fac = facs[0][0]
        L, r = G.adjoin(fac)
        self.grow(L)
        return r


def _axis_order(t) -> int:
    on_axis = [b for (a, b) in t if a == 0]
    return min(on_axis) if on_axis else -1


def _axis_owner(tracked, order: int) -> Optional[int]:
    if tracked is None:
        return None
    hits = [i for i, t in enumerate(tracked) if t is not None and _axis_order(t) == order]
    if len(hits) != 1:
        raise AssertionError(f"cannot attribute a branch to a unique factor ({hits})")
    return hits[0]


def _y_divisible_owner(tracked) -> int:
    hits = [i for i, t in enumerate(tracked) if t is not None and min(b for _, b in t) >= 1]
    if len(hits) != 1:
        raise AssertionError(f"cannot attribute an exact branch to a unique factor ({hits})")
    return hits[0]


def _deflate(f: List[NFElem], r: NFElem) -> List[NFElem]:
    """Quotient of ``f`` by ``(z - r)``."""
    n = len(f) - 1
    out = [None] * n
    acc = f[n]
    for k in range(n - 1, -1, -1):
        out[k] = acc
        acc = f[k] + acc * r
    return upoly_trim(out)


def _substitute(poly, alpha, beta, p, q, K, N) -> Dict[Tuple[int, int], NFElem]:
    """Compute ``g(alpha T^q, T^p (beta + Y)) / T^K`` keeping T-degree < N."""
    F = alpha.field
    out: Dict[Tuple[int, int], NFElem] = {}
    apow: Dict[int, NFElem] = {}
    bpow: Dict[int, NFElem] = {0: F.one()}
    maxb = max(b for _, b in poly)
    for t in range(1, maxb + 1):
        bpow[t] = bpow[t - 1] * beta
    for (a, b), c in poly.items():
        tdeg = q * a + p * b - K
        if N is not None and tdeg >= N:
            continue
        if a not in apow:
            apow[a] = alpha ** a
        base = c * apow[a]
        for t in range(b + 1):
            coef = base * (bpow[b - t] * comb(b, t))
            key = (tdeg, t)
            if key in out:
                out[key] = out[key] + coef
            else:
                out[key] = coef
    return {k: v for k, v in out.items() if not v.is_zero()}


def expand_tree(f: Poly2, mode: str = "rational", truncation_degree: Optional[int] = None,
                max_depth: int = 400, allow_shear: bool = True,
                factors: Optional[List[Poly2]] = None) -> ExpansionTree:
    """Build the expansion tree of the germ ``f`` at the origin.

    When ``factors`` (whose product is ``f``) are given, their transforms are
    carried along and every leaf records in ``owner`` the factor it comes from.
    """
    if factors is not None and truncation_degree is not None:
        raise ExpansionError("factor tracking needs exact polynomial input")
    if f.is_zero():
        raise ExpansionError("zero germ")
    if (0, 0) in f.terms:
        raise ExpansionError("germ does not pass through the origin")
    shear = 0
    g = f
    # tangent cone must not contain x = 0
    m0 = f.order()
    lowest = {k: v for k, v in f.terms.items() if k[0] + k[1] == m0}
    if (0, m0) not in lowest:
        if not allow_shear:
            raise ExpansionError("x = 0 is tangent to the curve")
        c = 1
        while True:
            val = sum((v * c**i for (i, j), v in lowest.items()), f.field.zero())
            if not val.is_zero():
                break
            c += 1
        shear = c
        X = Poly2.x(f.field) + Poly2.y(f.field) * c
        g = f.compose(X, Poly2.y(f.field), max_degree=truncation_degree)
        if factors is not None:
            factors = [h.compose(X, Poly2.y(f.field)) for h in factors]
    F = g.field
    root = Node(field=F, poly=dict(g.terms), e=Fraction(0), R=1, gamma=F.one(), s=0, prefix={})
    if factors is not None:
        root.tracked = [dict(h.lift(F).terms) for h in factors]
    eng = _Engine(mode, max_depth=max_depth)
    eng.grow(F)
    eng.run(root, truncation_degree)
    return ExpansionTree(root=root, mode=mode, shear=shear, base_field=F, leaves=eng.leaves)

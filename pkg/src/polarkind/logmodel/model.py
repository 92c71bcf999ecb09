"""Logarithmic foliations, their H-polynomials on the divisors of the
ramified resolution, discriminants and the set U_C."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..dualgraph.graph import DualGraph, build_dual_graph, chi_graph, is_kind
from ..foliation.charts import ChartVertex, chart_vertices, ramified_components
from ..foliation.form import OneForm
from ..foliation.polar import SamplingPolicy, generic_polar_equisingularity, gstar_check
from ..numfield.field import NFElem, NumberField, embed_elements, upoly_deriv, upoly_gcd, upoly_mul, upoly_trim
from ..numfield.poly import Poly2
from ..puiseux.germ import BivariateGerm, joint_equisingularity, labeled_expand
from ..puiseux.series import PuiseuxBranch

__all__ = [
    "LogFoliation",
    "logarithmic_form",
    "DivisorHData",
    "LogModel",
    "h_polynomial",
    "discriminant_test",
    "cs_indices_on_divisor",
    "UCReport",
    "membership_UC",
    "uc_nonempty",
    "ZariskiReport",
    "zariski_general_check",
]


# ---------------------------------------------------------------------------
# logarithmic forms
# ---------------------------------------------------------------------------


def _as_poly(c, F: Optional[NumberField] = None) -> Poly2:
    if isinstance(c, Poly2):
        return c
    if isinstance(c, BivariateGerm):
        return c.poly
    if isinstance(c, PuiseuxBranch):
        if c.n != 1 or c.trunc_s != float("inf"):
            raise ValueError("only finite smooth series y = eta(x) can be turned into equations")
        K = c.field
        terms = {(0, 1): K.one()}
        for s, a in c.terms.items():
            terms[(s, 0)] = -a
        return Poly2(K, terms)
    raise TypeError(f"cannot read a branch equation from {type(c).__name__}")


def _common_tower(parts: Sequence[Poly2], lam: Sequence) -> Tuple[List[Poly2], List[NFElem]]:
    """Lift the equations and the residues into one number field."""
    F = parts[0].field
    for P in parts[1:]:
        if P.field.is_extension_of(F):
            F = P.field
    parts = [P.lift(F) for P in parts]
    elems = []
    for a in lam:
        if isinstance(a, NFElem):
            elems.append(a)
        else:
            elems.append(F(Fraction(a)))
    L, images = embed_elements(F, elems)
    return [P.lift(L) for P in parts], images


@dataclass
class LogFoliation:
    """The foliation ``sum lambda_i df_i/f_i = 0`` with one equation per branch."""

    parts: List[Poly2]
    lam: List[NFElem]

    def __post_init__(self):
        if len(self.parts) != len(self.lam):
            raise ValueError("one residue per branch is required")
        if all(a.is_zero() for a in self.lam):
            raise ValueError("lambda must not vanish identically")

    @property
    def field(self) -> NumberField:
        return self.parts[0].field

    def form(self) -> OneForm:
        F = self.field
        A = Poly2(F)
        B = Poly2(F)
        for i, (fi, li) in enumerate(zip(self.parts, self.lam)):
            rest = Poly2.const(F, li)
            for j, fj in enumerate(self.parts):
                if j != i:
                    rest = rest * fj
            A = A + rest * fi.diff("x")
            B = B + rest * fi.diff("y")
        return OneForm(A, B)


def logarithmic_form(c: Sequence, lam: Sequence, trunc: Optional[int] = None) -> OneForm:
    """``omega_lambda = (prod f_i) sum lambda_i df_i/f_i`` as a polynomial form.

    ``c`` lists one equation per branch (polynomials, germs or finite smooth
    series ``y = eta(x)``); ``lam`` the residues.  With ``trunc`` the form is
    truncated at that total degree.
    """
    parts, lam = _common_tower([_as_poly(x) for x in c], lam)
    w = LogFoliation(parts, lam).form()
    if trunc is not None:
        return OneForm(w.A, w.B, trunc, check=False)
    return w


# ---------------------------------------------------------------------------
# the model: pulled-back components, divisors and H polynomials
# ---------------------------------------------------------------------------


@dataclass
class DivisorHData:
    """Everything the H-polynomial computation knows about one divisor.

    Polynomials are coefficient lists in the chart coordinate ``t`` (low to
    high).  ``points`` pairs each trace value ``c`` with the components
    through it; ``weights`` holds ``W_c`` (sum of the residues of those
    components) and ``mult`` the number of components ``r_c``.
    """

    vertex: ChartVertex
    base_vertex: Optional[int]
    l: int
    case: str
    n: int
    points: List[NFElem]
    weights: List[NFElem]
    mult: List[int]
    Lambda: NFElem
    A: List[NFElem]
    B: List[NFElem]
    H: List[NFElem]
    e: Dict[int, int] = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.vertex.p

    @property
    def b(self) -> int:
        return len(self.points)

    def degree(self) -> int:
        return len(self.H) - 1

    def __str__(self):
        cs = ", ".join(str(c) for c in self.points)
        hs = " + ".join(f"({c})*t^{k}" for k, c in enumerate(self.H) if not c.is_zero())
        return f"divisor v={Fraction(self.p, self.n)} (level {self.p}, {self.case}): points [{cs}]; H = {hs or 0}"


def _linear_product(F: NumberField, roots: Sequence[Tuple[NFElem, int]]) -> List[NFElem]:
    out = [F.one()]
    for c, r in roots:
        for _ in range(r):
            out = upoly_mul(out, [-c, F.one()])
    return out


def _poly_add(p: List[NFElem], q: List[NFElem], F: NumberField) -> List[NFElem]:
    n = max(len(p), len(q))
    return upoly_trim([(p[k] if k < len(p) else F.zero()) + (q[k] if k < len(q) else F.zero()) for k in range(n)])


class LogModel:
    """A logarithmic foliation together with the resolution of ``rho^{-1} C``.

    ``parts`` are the branch equations of ``C`` (one irreducible factor each)
    and ``lam`` the residues.  ``n`` defaults to the smallest ramification
    order making every branch smooth.
    """

    def __init__(self, parts: Sequence, lam: Sequence, n: Optional[int] = None):
        parts, lam = _common_tower([_as_poly(x) for x in parts], lam)
        self.log = LogFoliation(parts, lam)
        self.parts = parts
        probe = labeled_expand(parts)
        owners = [o for o, _ in probe]
        if sorted(owners) != list(range(len(parts))):
            raise ValueError("every equation must define exactly one branch")
        L = 1
        for _, b in probe:
            L = L * b.n // math.gcd(L, b.n)
        if n is None:
            n = L
        if n % L:
            raise ValueError(f"x = u^{n} does not make every branch smooth (need a multiple of {L})")
        self.n = n
        self.comps = ramified_components(parts, n)
        self.field = self.comps[0][1].field
        self.lam = [a.lift(self.field) for a in lam]
        self.owner = [o for o, _ in self.comps]
        self.branches = [b for _, b in self.comps]
        self.vertices = chart_vertices(self.branches)
        self.labeled = joint_equisingularity([("C", BivariateGerm.from_poly(P)) for P in parts])
        self.base_graph = build_dual_graph(self.labeled)

    # -- combinatorics ------------------------------------------------------
    def base_vertex(self, V: ChartVertex) -> Optional[int]:
        """Divisor of ``G(C)`` with ``v = p/n`` on the geodesic of the branches through ``V``."""
        target = Fraction(V.p, self.n)
        label = f"C{self.owner[V.members[0]] + 1}"
        for E in self.base_graph.geodesics.get(label, []):
            if self.base_graph.vertices[E].v == target:
                return E
        return None

    def case_of(self, E: Optional[int]) -> str:
        g = self.base_graph
        if E is None:
            return "chain"
        X = g.vertices[E]
        if X.b < 2:
            return "chain"
        if not X.is_puiseux:
            return "contact"
        return "puiseux-dead-arc" if g.dead_arc_at(E) is not None else "puiseux-no-dead-arc"

    def first_divisor(self) -> Optional[ChartVertex]:
        for V in self.vertices:
            if V.p == self.n:
                return V
        return None

    def bifurcations(self) -> List[ChartVertex]:
        return [V for V in self.vertices if V.b >= 2]

    def order_along(self, V: ChartVertex, k: int) -> int:
        """``ord_x(eps_V(x) - eta_k(x))`` capped at ``p``."""
        b = self.branches[k]
        for s in range(1, V.p):
            if b.coefficient(s) != V.prefix.get(s, self.field.zero()):
                return s
        return V.p

    def Lambda(self, V: ChartVertex) -> NFElem:
        """Weighted order of the logarithmic form along the divisor ``V``."""
        F = self.field
        out = F.zero()
        for k in range(len(self.branches)):
            out = out + self.lam[self.owner[k]] * self.order_along(V, k)
        return out

    def form(self) -> OneForm:
        return self.log.form()

    def h_data(self, V: ChartVertex) -> DivisorHData:
        F = self.field
        pts = [c for c, _ in V.points]
        mult = [len(ms) for _, ms in V.points]
        weights = []
        for _, ms in V.points:
            w = F.zero()
            for k in ms:
                w = w + self.lam[self.owner[k]]
            weights.append(w)
        H: List[NFElem] = []
        for s, c in enumerate(pts):
            term = [weights[s]]
            for j, c2 in enumerate(pts):
                if j != s:
                    term = upoly_mul(term, [-c2, F.one()])
            H = _poly_add(H, term, F)
        Lam = self.Lambda(V)
        A = [a * Lam for a in _linear_product(F, list(zip(pts, mult)))] if not Lam.is_zero() else []
        B = upoly_mul(_linear_product(F, [(c, r - 1) for c, r in zip(pts, mult)]), H) if H else []
        E = self.base_vertex(V)
        same = [W for W in self.vertices if W.p == V.p and self.base_vertex(W) == E]
        l = [W.id for W in same].index(V.id)
        e = {}
        for _, ms in V.points:
            for k in ms:
                e[self.owner[k]] = e.get(self.owner[k], 0) + 1
        return DivisorHData(V, E, l, self.case_of(E), self.n, pts, weights, mult, Lam, A, B, H, e)


def h_polynomial(model: LogModel, vertex: Union[int, ChartVertex]) -> DivisorHData:
    """``A^E(0,t)``, ``B^E(0,t)`` and ``H(t)`` of the pulled-back logarithmic form.

    With trace points ``c`` (``r_c`` components, residue sum ``W_c``) and
    ``Lambda`` the weighted order of the form along the divisor::

        A = Lambda * prod (t - c)^(r_c)
        B = prod (t - c)^(r_c - 1) * H,   H = sum_c W_c prod_{c' != c} (t - c')
    """
    V = model.vertices[vertex] if isinstance(vertex, int) else vertex
    return model.h_data(V)


def discriminant_test(h: Union[DivisorHData, Sequence[NFElem]]) -> str:
    """``"distinct"`` when ``H`` has ``b - 1`` distinct roots, else ``"repeated"``.

    A drop of degree (vanishing top coefficient) sends a root to the corner
    with the previous divisor and also counts as ``"repeated"``.  A bare
    coefficient list (low to high) is tested for distinct roots at its own
    degree.  Arithmetic is exact, so ``"undecided"`` never occurs for
    number-field data.
    """
    if isinstance(h, DivisorHData):
        H, degree = upoly_trim(h.H), h.b - 1
    else:
        H = upoly_trim(list(h))
        degree = len(H) - 1
    if not H or len(H) - 1 != degree:
        return "repeated"
    if len(H) <= 2:
        return "distinct"
    g = upoly_gcd(H, upoly_deriv(H))
    return "distinct" if len(g) == 1 else "repeated"


def discriminant_value(h: DivisorHData) -> NFElem:
    """The discriminant of ``H`` as a polynomial of degree ``b - 1`` (zero when the degree drops)."""
    H = upoly_trim(h.H)
    F = h.Lambda.field
    d = h.b - 1
    if len(H) - 1 != d:
        return F.zero()
    if d <= 0:
        return F.one()
    # Res(H, H') / lc(H) via the Sylvester determinant
    Hp = upoly_deriv(H)
    m, k = len(H) - 1, len(Hp) - 1
    size = m + k
    rows = []
    for i in range(k):
        rows.append([F.zero()] * i + list(reversed(H)) + [F.zero()] * (size - m - 1 - i))
    for i in range(m):
        rows.append([F.zero()] * i + list(reversed(Hp)) + [F.zero()] * (size - k - 1 - i))
    det = _det(rows, F)
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    return det * sign / H[-1]


def _det(M: List[List[NFElem]], F: NumberField) -> NFElem:
    M = [list(r) for r in M]
    n = len(M)
    det = F.one()
    for c in range(n):
        piv = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
        if piv is None:
            return F.zero()
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c]
        inv = M[c][c].inverse()
        for r in range(c + 1, n):
            if M[r][c].is_zero():
                continue
            f = M[r][c] * inv
            for k in range(c, n):
                M[r][k] = M[r][k] - f * M[c][k]
    return det


def cs_indices_on_divisor(h: DivisorHData) -> List[NFElem]:
    """Camacho-Sad indices of the divisor at its trace points, read in the chart.

    At a point ``c`` this is ``-Res_c B/A = -H(c) / (Lambda prod_{c' != c}(c - c'))
    = -W_c / Lambda``.  At a corner the index after the corner is blown up is
    this value minus one.
    """
    if h.Lambda.is_zero():
        raise ValueError("the divisor is dicritical for this lambda")
    F = h.Lambda.field
    out = []
    for s, c in enumerate(h.points):
        Hc = F.zero()
        for a in reversed(h.H):
            Hc = Hc * c + a
        den = h.Lambda
        for j, c2 in enumerate(h.points):
            if j != s:
                den = den * (c - c2)
        out.append(-Hc / den)
    return out


# ---------------------------------------------------------------------------
# U_C
# ---------------------------------------------------------------------------


@dataclass
class UCReport:
    """Verdict ``"in"``, ``"out"``, ``"undetermined-resonance"`` or ``"empty"``.

    ``divisors`` holds the H data and discriminant status of every divisor
    that was examined; ``failing`` names the divisor responsible for ``out``.
    """

    verdict: str
    divisors: List[Tuple[DivisorHData, str]] = field(default_factory=list)
    failing: Optional[DivisorHData] = None
    reasons: List[str] = field(default_factory=list)
    witness: Optional[Tuple[int, int]] = None

    def __str__(self):
        lines = [f"verdict: {self.verdict}"]
        for h, st in self.divisors:
            lines.append(f"  {h}: {st}")
        lines += [f"  {r}" for r in self.reasons]
        return "\n".join(lines)


def uc_nonempty(e) -> bool:
    """``U_C`` is non-empty exactly for kind equisingularity types."""
    g = e if isinstance(e, DualGraph) else build_dual_graph(e)
    return bool(is_kind(g))


def resonance_check(model: LogModel) -> List[str]:
    """Direct replacement of the resonance conditions on ``lambda``.

    The pulled-back logarithmic form must leave every divisor invariant and
    have no corner of Camacho-Sad index ``-1``; every residue must be nonzero.
    The corner indices are computed through explicit blow-up charts.
    """
    reasons = []
    for i, a in enumerate(model.lam):
        if a.is_zero():
            reasons.append(f"lambda_{i + 1} = 0: C{i + 1} is not a separatrix of a reduced form")
    if reasons:
        return reasons
    rep = gstar_check(model.form(), model.parts, model.n)
    if rep.verdict != "pass":
        reasons.extend(rep.reasons or [f"G* verdict {rep.verdict}"])
    return reasons


def membership_UC(parts: Sequence, lam: Sequence, n: Optional[int] = None) -> UCReport:
    """Decide ``lambda in U_C`` for the curve with branch equations ``parts``.

    ``out`` as soon as some divisor other than the first one of the ramified
    resolution has an H-polynomial without ``b - 1`` distinct roots;
    ``undetermined-resonance`` when all discriminants are fine but the
    logarithmic model fails the direct resonance check; ``empty`` for
    non-kind curves.
    """
    model = LogModel(parts, lam, n)
    k = is_kind(model.base_graph)
    if not k:
        return UCReport("empty", reasons=[f"not kind: dead arc {k.witness}"], witness=k.witness)
    divs = []
    for V in model.bifurcations():
        if V.p <= model.n:
            continue
        h = model.h_data(V)
        st = discriminant_test(h)
        divs.append((h, st))
        if st != "distinct":
            return UCReport("out", divs, h, [f"H has repeated roots on the divisor v={Fraction(V.p, model.n)}"])
    res = resonance_check(model)
    if res:
        return UCReport("undetermined-resonance", divs, None, res)
    return UCReport("in", divs)


# ---------------------------------------------------------------------------
# properties (A) and (B)
# ---------------------------------------------------------------------------


@dataclass
class ZariskiReport:
    property_A: bool
    property_B: bool
    witness: Optional[Tuple[int, int]] = None

    @property
    def implication_holds(self) -> bool:
        return (not self.property_A) or self.property_B


def zariski_general_check(w: OneForm, parts: Sequence[Poly2], n: Optional[int] = None,
                          policy: Optional[SamplingPolicy] = None) -> ZariskiReport:
    """(A): the generic polar of ``rho^* F`` realizes ``chi`` of ``rho^{-1} C``;
    (B): the pull-back of the generic polar of ``F`` does.

    Both compare decorated dual graphs with :func:`chi_graph` of the
    pulled-back curve.  ``A => B`` is checked and a violation raises.
    """
    from ..foliation.charts import pull_curve, ramification_order
    from ..foliation.form import pullback_form

    parts = [_as_poly(P) for P in parts]
    C = parts[0]
    for P in parts[1:]:
        C = C * P
    g0 = build_dual_graph(joint_equisingularity([("C", BivariateGerm.from_poly(P)) for P in parts]))
    k = is_kind(g0)
    if not k:
        return ZariskiReport(False, False, k.witness)
    if n is None:
        n = ramification_order(parts)
    pulled = [pull_curve(P, n) for P in parts]
    Cp = pull_curve(C, n)
    chi = chi_graph(build_dual_graph(joint_equisingularity([("C", BivariateGerm.from_poly(P)) for P in pulled])))
    kmap = {"G": "Z"}
    ra = generic_polar_equisingularity(pullback_form(w, n), Cp, policy, curve_parts=pulled)
    prop_a = build_dual_graph(ra.union).isomorphic(chi, kmap)
    rb = generic_polar_equisingularity(w, C, policy, curve_parts=parts, ramify=n)
    prop_b = build_dual_graph(rb.union).isomorphic(chi, kmap)
    rep = ZariskiReport(prop_a, prop_b)
    if not rep.implication_holds:
        raise AssertionError("property (A) holds but (B) fails")
    return rep

"""Sparse bivariate polynomials with number-field coefficients."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .expr import ParseError, collect_radicands, parse_expr
from .field import NFElem, NumberField
from .scalar import tower_field

__all__ = ["Poly2", "parse_polys", "common_field"]


class Poly2:
    """Polynomial ``sum c_ij x^i y^j`` over a number field; zero terms are never stored."""

    __slots__ = ("field", "terms")

    def __init__(self, field: NumberField, terms: Optional[Dict[Tuple[int, int], NFElem]] = None):
        self.field = field
        self.terms = {}
        if terms:
            for k, v in terms.items():
                v = field(v)
                if not v.is_zero():
                    self.terms[k] = v

    # -- constructors ------------------------------------------------------------
    @classmethod
    def const(cls, field, c) -> "Poly2":
        return cls(field, {(0, 0): field(c)})

    @classmethod
    def x(cls, field) -> "Poly2":
        return cls(field, {(1, 0): field.one()})

    @classmethod
    def y(cls, field) -> "Poly2":
        return cls(field, {(0, 1): field.one()})

    @classmethod
    def from_dict(cls, field, d) -> "Poly2":
        return cls(field, {k: field(v) for k, v in d.items()})

    # -- basic queries -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, i: int, j: int) -> NFElem:
        return self.terms.get((i, j), self.field.zero())

    def support(self) -> List[Tuple[int, int]]:
        return sorted(self.terms)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def order(self) -> int:
        """Total order at the origin (multiplicity)."""
        return min((i + j for i, j in self.terms), default=-1)

    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def lift(self, F: NumberField) -> "Poly2":
        if F is self.field:
            return self
        return Poly2(F, {k: v.lift(F) for k, v in self.terms.items()})

    def _common(self, other: "Poly2"):
        if other.field is self.field:
            return self, other
        if other.field.is_extension_of(self.field):
            return self.lift(other.field), other
        if self.field.is_extension_of(other.field):
            return self, other.lift(self.field)
        if other.field.degree == 1:
            return self, other.lift(self.field)
        if self.field.degree == 1:
            return self.lift(other.field), other
        raise ValueError("polynomials live in unrelated fields")

    # -- arithmetic --------------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2.const(self.field, other)
        a, b = self._common(other)
        out = dict(a.terms)
        for k, v in b.terms.items():
            out[k] = out[k] + v if k in out else v
        return Poly2(a.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2(self.field, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2.const(self.field, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            c = self.field(other) if not isinstance(other, NFElem) else other
            if isinstance(c, NFElem) and c.field is not self.field:
                a = self.lift(c.field) if c.field.is_extension_of(self.field) else self
                c = a.field(c)
                return Poly2(a.field, {k: v * c for k, v in a.terms.items()})
            return Poly2(self.field, {k: v * c for k, v in self.terms.items()})
        a, b = self._common(other)
        out: Dict[Tuple[int, int], NFElem] = {}
        for (i1, j1), c1 in a.terms.items():
            for (i2, j2), c2 in b.terms.items():
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                out[k] = out[k] + p if k in out else p
        return Poly2(a.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly2.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    # -- calculus and substitutions ----------------------------------------------------------
    def diff(self, var: str) -> "Poly2":
        out = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i > 0:
                out[(i - 1, j)] = c * i
            elif var == "y" and j > 0:
                out[(i, j - 1)] = c * j
        return Poly2(self.field, out)

    def truncate(self, degree: int) -> "Poly2":
        """Drop monomials of total degree above ``degree``."""
        return Poly2(self.field, {k: v for k, v in self.terms.items() if k[0] + k[1] <= degree})

    def compose(self, X: "Poly2", Y: "Poly2", max_degree: Optional[int] = None) -> "Poly2":
        """Substitute ``x -> X, y -> Y`` (optionally truncating at a total degree)."""
        F = self.field
        for P in (X, Y):
            if P.field is not F and P.field.is_extension_of(F):
                F = P.field
        X, Y, me = X.lift(F), Y.lift(F), self.lift(F)
        xp = {0: Poly2.const(F, 1)}
        yp = {0: Poly2.const(F, 1)}
        out = Poly2(F)
        for (i, j), c in sorted(me.terms.items()):
            if i not in xp:
                xp[i] = _pw(X, i, xp, max_degree)
            if j not in yp:
                yp[j] = _pw(Y, j, yp, max_degree)
            t = xp[i] * yp[j]
            if max_degree is not None:
                t = t.truncate(max_degree)
            out = out + t * c
        return out

    def eval_y0(self) -> Dict[int, NFElem]:
        """Coefficients of ``p(x, 0)``."""
        return {i: c for (i, j), c in self.terms.items() if j == 0}

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][1])):
            mono = []
            if i:
                mono.append("x" if i == 1 else f"x^{i}")
            if j:
                mono.append("y" if j == 1 else f"y^{j}")
            cs = _coeff_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(mono))
            elif cs == "-1":
                parts.append("-" + "*".join(mono))
            else:
                parts.append(cs + "*" + "*".join(mono))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"Poly2({self.to_str()})"


def _pw(P: Poly2, k: int, cache, max_degree):
    best = max(e for e in cache if e <= k)
    out = cache[best]
    for e in range(best + 1, k + 1):
        out = out * P
        if max_degree is not None:
            out = out.truncate(max_degree)
        cache[e] = out
    return out


def _coeff_str(c: NFElem) -> str:
    if c.is_rational():
        r = c.rational()
        return str(r) if r.denominator == 1 else f"({r})"
    return str(c)


def common_field(texts: Sequence[str], variables=("x", "y")) -> Tuple[NumberField, dict, list]:
    """Parse several texts and return the smallest tower containing all their constants."""
    trees = [parse_expr(t, variables) for t in texts]
    uses_i, rads = False, set()
    for t in trees:
        u, r = collect_radicands(t)
        uses_i |= u
        rads |= r
    F, imgs = tower_field(uses_i, tuple(sorted(rads)))
    return F, imgs, trees


def _eval_poly(e, F, imgs) -> Poly2:
    tag = e[0]
    if tag == "num":
        return Poly2.const(F, F(e[1]))
    if tag == "i":
        return Poly2.const(F, imgs["i"])
    if tag == "sqrt":
        return Poly2.const(F, imgs[e[1]])
    if tag == "var":
        return Poly2.x(F) if e[1] == "x" else Poly2.y(F)
    if tag == "neg":
        return -_eval_poly(e[1], F, imgs)
    if tag == "pow":
        return _eval_poly(e[1], F, imgs) ** e[2]
    a = _eval_poly(e[1], F, imgs)
    b = _eval_poly(e[2], F, imgs)
    if tag == "add":
        return a + b
    if tag == "sub":
        return a - b
    if tag == "mul":
        return a * b
    if any(k != (0, 0) for k in b.terms) or b.is_zero():
        raise ParseError("division is only allowed by nonzero constants")
    return a * b.terms[(0, 0)].inverse()


def parse_polys(texts: Sequence[str], variables=("x", "y"), field: Optional[NumberField] = None) -> List[Poly2]:
    """Parse polynomial texts into :class:`Poly2` objects over one common field."""
    F, imgs, trees = common_field(texts, variables)
    if field is not None and field is not F:
        if field.is_extension_of(F):
            imgs = {k: v.lift(field) for k, v in imgs.items()}
            F = field
        elif F.degree == 1:
            F = field
    return [_eval_poly(t, F, imgs) for t in trees]

"""Germs of holomorphic 1-forms ``A dx + B dy`` and their polar curves."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from ..numfield.expr import ParseError
from ..numfield.field import NFElem, NumberField
from ..numfield.poly import Poly2, parse_polys
from ..puiseux.germ import BivariateGerm

__all__ = [
    "OneForm",
    "Direction",
    "FormError",
    "parse_form",
    "polar_curve",
    "pullback_form",
    "nu0",
]


class FormError(ValueError):
    """A 1-form that does not meet the requirements of an operation."""


def _unify(*polys: Poly2) -> List[Poly2]:
    F = polys[0].field
    for p in polys[1:]:
        if p.field is F or F.is_extension_of(p.field) or p.field.degree == 1:
            continue
        if p.field.is_extension_of(F) or F.degree == 1:
            F = p.field
        else:
            raise FormError("coefficients live in unrelated number fields")
    return [p.lift(F) for p in polys]


class OneForm:
    """The 1-form ``omega = A dx + B dy`` at the origin of ``C^2``.

    ``truncation_degree`` is ``None`` for exact polynomial forms; otherwise
    coefficients of ``A`` and ``B`` above that total degree are unknown.
    """

    def __init__(self, A: Poly2, B: Poly2, truncation_degree: Optional[int] = None, check: bool = True):
        A, B = _unify(A, B)
        if truncation_degree is not None:
            A, B = A.truncate(truncation_degree), B.truncate(truncation_degree)
        self.A = A
        self.B = B
        self.truncation_degree = truncation_degree
        if check:
            if A.is_zero() and B.is_zero():
                raise FormError("the zero form does not define a foliation")
            if (0, 0) in A.terms or (0, 0) in B.terms:
                raise FormError("A(0,0) and B(0,0) must vanish (singular foliation)")

    @property
    def field(self) -> NumberField:
        return self.A.field

    @property
    def truncated(self) -> bool:
        return self.truncation_degree is not None

    @classmethod
    def exact(cls, f: Poly2) -> "OneForm":
        """The hamiltonian form ``df``."""
        return cls(f.diff("x"), f.diff("y"))

    def germ_A(self) -> BivariateGerm:
        return BivariateGerm.from_poly(self.A, self.truncation_degree)

    def germ_B(self) -> BivariateGerm:
        return BivariateGerm.from_poly(self.B, self.truncation_degree)

    def lift(self, F: NumberField) -> "OneForm":
        return OneForm(self.A.lift(F), self.B.lift(F), self.truncation_degree, check=False)

    def scaled(self, c) -> "OneForm":
        return OneForm(self.A * c, self.B * c, self.truncation_degree, check=False)

    def is_exact_form(self) -> bool:
        """``d(omega) = 0``, i.e. ``A_y = B_x``."""
        return (self.A.diff("y") - self.B.diff("x")).is_zero()

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.A == other.A and self.B == other.B and self.truncation_degree == other.truncation_degree

    def to_str(self) -> str:
        s = f"({self.A.to_str()}) dx + ({self.B.to_str()}) dy"
        if self.truncated:
            s += f" + O({self.truncation_degree + 1})"
        return s

    __str__ = to_str

    def __repr__(self):
        return f"OneForm({self.to_str()})"


@dataclass(frozen=True)
class Direction:
    """A point ``[a:b]`` of the projective line."""

    a: Union[Fraction, NFElem]
    b: Union[Fraction, NFElem]

    def __post_init__(self):
        za = self.a.is_zero() if isinstance(self.a, NFElem) else self.a == 0
        zb = self.b.is_zero() if isinstance(self.b, NFElem) else self.b == 0
        if za and zb:
            raise ValueError("[0:0] is not a direction")

    @classmethod
    def parse(cls, text: str) -> "Direction":
        parts = [t.strip() for t in text.strip().strip("[]").replace(",", ":").split(":")]
        if len(parts) != 2:
            raise ParseError(f"direction must look like 'a:b', got {text!r}")
        return cls(Fraction(parts[0]), Fraction(parts[1]))

    def __str__(self):
        return f"[{self.a}:{self.b}]"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _split_terms(text: str) -> Tuple[List[str], List[str]]:
    """Split ``text`` at top-level ``dx``/``dy`` markers into coefficient pieces."""
    dx, dy = [], []
    depth, start, k = 0, 0, 0
    while k < len(text):
        ch = text[k]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(("dx", "dy"), k) and (k + 2 == len(text) or not text[k + 2].isalnum()):
            coef = text[start:k].strip().rstrip("*").strip()
            if coef in ("", "+"):
                coef = "1"
            elif coef == "-":
                coef = "-1"
            elif coef.endswith(("+", "-")):
                coef = coef + "1"
            (dx if text[k + 1] == "x" else dy).append(coef)
            start = k + 2
            k += 2
            continue
        k += 1
    if text[start:].strip():
        raise ParseError(f"trailing text {text[start:].strip()!r} is not attached to dx or dy")
    return dx, dy


def parse_form(text: str, field: Optional[NumberField] = None) -> OneForm:
    """Parse ``A(x,y) dx + B(x,y) dy`` or ``d(f)``.

    Coefficients use the scalar expression grammar with explicit ``*``;
    several pieces multiplying the same differential are added.
    """
    t = text.strip()
    if not t:
        raise ParseError("empty form")
    m = re.fullmatch(r"d\s*\((.*)\)", t, flags=re.S)
    if m and _balanced(m.group(1)):
        (f,) = parse_polys([m.group(1)], field=field)
        return OneForm.exact(f)
    dx, dy = _split_terms(t)
    if not dx and not dy:
        raise ParseError(f"no dx or dy in {text!r}")
    pieces = dx + dy
    polys = parse_polys(pieces, field=field)
    F = polys[0].field
    A = Poly2(F)
    B = Poly2(F)
    for k, p in enumerate(polys):
        if k < len(dx):
            A = A + p
        else:
            B = B + p
    return OneForm(A, B)


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


# ---------------------------------------------------------------------------
# polar curves, pull-backs
# ---------------------------------------------------------------------------


def polar_curve(w: OneForm, d: Direction) -> BivariateGerm:
    """The polar ``a A + b B`` of ``w`` in the direction ``[a:b]``."""
    F = w.field
    a, b = F(d.a), F(d.b)
    p = w.A * a + w.B * b
    if p.is_zero():
        raise FormError(f"the polar curve in direction {d} is identically zero")
    if w.truncated:
        return BivariateGerm(p, w.truncation_degree, True)
    return BivariateGerm(p, max(p.total_degree(), 0), False)


def pullback_form(w: OneForm, n: int) -> OneForm:
    """``rho^* w`` for ``rho(u, v) = (u^n, v)``, written in the variables ``x, y``."""
    if n < 1:
        raise ValueError("ramification order must be positive")
    if n == 1:
        return w
    F = w.field

    def sub(P: Poly2, shift: int, c) -> Poly2:
        return Poly2(F, {(n * i + shift, j): v * c for (i, j), v in P.terms.items()})

    return OneForm(sub(w.A, n - 1, n), sub(w.B, 0, 1), w.truncation_degree, check=False)


def nu0(w: OneForm) -> int:
    """Algebraic multiplicity ``min(ord A, ord B)`` of the foliation."""
    orders = [p.order() for p in (w.A, w.B) if not p.is_zero()]
    return min(orders)

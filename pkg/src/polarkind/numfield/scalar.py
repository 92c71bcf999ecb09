"""Certified scalars: exact Gaussian rationals, exact quadratic towers, and balls.

A :class:`Scalar` is one of

* ``exact``    -- a Gaussian rational ``a + b i`` with ``a, b`` in Q,
* ``tower``    -- an exact element of a number field ``Q(i, sqrt(d1), ...)``,
* ``interval`` -- a complex ball (python-flint ``acb``) known to contain the value.

Interval scalars optionally keep the expression tree they were computed from
(their *lineage*), which lets :func:`escalate` recompute them at a higher
precision.  Sign decisions go through :func:`certify_sign`, which never
guesses: a ball containing zero is reported as ``"undecided"``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import flint

from .expr import ParseError, collect_radicands, expr_to_str, parse_expr
from .field import QQ, NFElem, NumberField, _Prec, factor_over

__all__ = [
    "Scalar",
    "parse_scalar",
    "certify_sign",
    "escalate",
    "decide_sign",
    "LineageError",
    "UndecidedError",
    "tower_field",
    "eval_in_field",
    "DEFAULT_PRECISION",
    "MAX_PRECISION",
]

DEFAULT_PRECISION = 128
MAX_PRECISION = 2048
MIN_PRECISION = 64


class LineageError(ValueError):
    """Raised when a value must be recomputed but carries no expression lineage."""


class UndecidedError(ArithmeticError):
    """Raised when a sign stays undecided up to the precision cap."""


# ---------------------------------------------------------------------------
# exact towers Q(i, sqrt(d1), sqrt(d2), ...)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def tower_field(uses_i: bool, radicands: Tuple[int, ...]) -> Tuple[NumberField, dict]:
    """Build (and cache) the field generated by ``i`` and the given square roots.

    Returns the field and a dict with the images of ``"i"`` and of each
    radicand ``d`` (the principal square root, positive imaginary part for
    negative ``d``).
    """
    F = QQ
    images = {}
    gens = []
    if uses_i:
        gens.append(("i", -1))
    for d in sorted(set(radicands)):
        gens.append((d, d))
    for key, d in gens:
        principal = complex(0, math.sqrt(-d)) if d < 0 else complex(math.sqrt(d), 0)
        h = [F(-d), F(0), F(1)]
        facs = factor_over(F, h)
        root = None
        for fac, _ in facs:
            if len(fac) == 2:
                cand = -fac[0]
                if abs(cand.to_complex() - principal) < 1e-6 * (1 + abs(principal)):
                    root = cand
        if root is None:
            F, root = F.adjoin(h, near=principal)
            images = {k: v.lift(F) for k, v in images.items()}
        images[key] = root
    images = {k: v.lift(F) for k, v in images.items()}
    return F, images


def eval_in_field(e, F: NumberField, images: dict, variables=None):
    """Evaluate an expression tree exactly in ``F`` (no variables allowed)."""
    tag = e[0]
    if tag == "num":
        return F(e[1])
    if tag == "i":
        return images["i"]
    if tag == "sqrt":
        return images[e[1]]
    if tag == "neg":
        return -eval_in_field(e[1], F, images)
    if tag == "pow":
        return eval_in_field(e[1], F, images) ** e[2]
    if tag == "var":
        raise ParseError(f"variable {e[1]!r} not allowed in a scalar")
    a = eval_in_field(e[1], F, images)
    b = eval_in_field(e[2], F, images)
    if tag == "add":
        return a + b
    if tag == "sub":
        return a - b
    if tag == "mul":
        return a * b
    if b.is_zero():
        raise ZeroDivisionError("division by zero in expression")
    return a / b


def _eval_ball(e, prec: int) -> flint.acb:
    tag = e[0]
    if tag == "num":
        v = e[1]
        return flint.acb(flint.arb(flint.fmpq(v.numerator, v.denominator)))
    if tag == "i":
        return flint.acb(0, 1)
    if tag == "sqrt":
        return flint.acb(e[1]).sqrt()
    if tag == "neg":
        return -_eval_ball(e[1], prec)
    if tag == "pow":
        base = _eval_ball(e[1], prec)
        out = flint.acb(1)
        for _ in range(e[2]):
            out = out * base
        return out
    a = _eval_ball(e[1], prec)
    b = _eval_ball(e[2], prec)
    if tag == "add":
        return a + b
    if tag == "sub":
        return a - b
    if tag == "mul":
        return a * b
    return a / b


def _ball(e, prec: int) -> flint.acb:
    with _Prec(prec):
        return _eval_ball(e, prec)


def _gaussian_of(x: NFElem) -> Optional[Tuple[Fraction, Fraction]]:
    """Return (a, b) if the algebraic number ``x`` equals ``a + b i`` with rational a, b."""
    if x.is_rational():
        return x.rational(), Fraction(0)
    mp = x.minpoly()
    if mp.degree() != 2:
        return None
    c = mp.coeffs()
    q, p = Fraction(int(c[0].p), int(c[0].q)), Fraction(int(c[1].p), int(c[1].q))
    disc = 4 * q - p * p
    if disc <= 0:
        return None
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    s = Fraction(rn, rd)
    a = -p / 2
    b = s / 2
    if x.to_complex().imag < 0:
        b = -b
    return a, b


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------


class Scalar:
    """Immutable certified complex number."""

    __slots__ = ("kind", "re", "im", "elem", "ball", "prec", "lineage")

    def __init__(self, kind, re=None, im=None, elem=None, ball=None, prec=DEFAULT_PRECISION, lineage=None):
        if prec < MIN_PRECISION:
            raise ValueError("precision must be at least 64 bits")
        self.kind = kind
        self.re = re
        self.im = im
        self.elem = elem
        self.ball = ball
        self.prec = prec
        self.lineage = lineage

    # -- constructors ------------------------------------------------------------
    @classmethod
    def exact(cls, re, im=0, lineage=None) -> "Scalar":
        re, im = Fraction(re), Fraction(im)
        if lineage is None:
            lineage = _gauss_expr(re, im)
        return cls("exact", re=re, im=im, lineage=lineage)

    @classmethod
    def from_elem(cls, x: NFElem, lineage=None) -> "Scalar":
        g = _gaussian_of(x)
        if g is not None:
            return cls.exact(g[0], g[1])
        return cls("tower", elem=x, lineage=lineage)

    @classmethod
    def from_ball(cls, ball: flint.acb, prec: int = DEFAULT_PRECISION, lineage=None) -> "Scalar":
        return cls("interval", ball=ball, prec=prec, lineage=lineage)

    # -- views -------------------------------------------------------------------
    def is_exact(self) -> bool:
        return self.kind in ("exact", "tower")

    def to_acb(self, prec: Optional[int] = None) -> flint.acb:
        prec = prec or self.prec
        if self.kind == "exact":
            with _Prec(prec):
                return flint.acb(
                    flint.arb(flint.fmpq(self.re.numerator, self.re.denominator)),
                    flint.arb(flint.fmpq(self.im.numerator, self.im.denominator)),
                )
        if self.kind == "tower":
            return self.elem.to_acb(prec)
        return self.ball

    def radius(self) -> float:
        if self.is_exact():
            return 0.0
        b = self.ball
        return float(max(b.real.rad(), b.imag.rad()))

    def to_complex(self) -> complex:
        z = self.to_acb(64)
        return complex(float(z.real.mid()), float(z.imag.mid()))

    def to_elem(self, F: Optional[NumberField] = None) -> NFElem:
        """Exact element in a number field (recomputed from lineage when needed)."""
        if self.kind == "tower":
            return self.elem if F is None else self.elem.lift(F)
        if self.kind == "exact":
            if self.im == 0:
                return (F or QQ)(self.re)
            K, imgs = tower_field(True, ())
            val = K(self.re) + imgs["i"] * K(self.im)
            return val if F is None else val.lift(F)
        if self.lineage is None:
            raise LineageError("interval scalar has no lineage to evaluate exactly")
        uses_i, rads = collect_radicands(self.lineage)
        K, imgs = tower_field(uses_i, tuple(sorted(rads)))
        val = eval_in_field(self.lineage, K, imgs)
        return val if F is None else val.lift(F)

    # -- arithmetic ----------------------------------------------------------------
    def _binary(self, other, tag):
        other = _as_scalar(other)
        lin = (tag, self.lineage, other.lineage) if self.lineage and other.lineage else None
        if self.kind == "exact" and other.kind == "exact":
            a, b = complex_frac(self), complex_frac(other)
            r = _gauss_op(a, b, tag)
            return Scalar.exact(r[0], r[1], lineage=lin)
        if self.is_exact() and other.is_exact():
            try:
                x = self.to_elem()
                y = other.to_elem()
                r = {"add": lambda: x + y, "sub": lambda: x - y, "mul": lambda: x * y, "div": lambda: x / y}[tag]()
                return Scalar.from_elem(r, lineage=lin)
            except ValueError:
                pass
        prec = min(self.prec, other.prec)
        with _Prec(prec):
            x, y = self.to_acb(prec), other.to_acb(prec)
            r = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y if tag == "div" else None}[tag]
        return Scalar.from_ball(r, prec=prec, lineage=lin)

    def __add__(self, o):
        return self._binary(o, "add")

    def __radd__(self, o):
        return _as_scalar(o)._binary(self, "add")

    def __sub__(self, o):
        return self._binary(o, "sub")

    def __rsub__(self, o):
        return _as_scalar(o)._binary(self, "sub")

    def __mul__(self, o):
        return self._binary(o, "mul")

    def __rmul__(self, o):
        return _as_scalar(o)._binary(self, "mul")

    def __truediv__(self, o):
        return self._binary(o, "div")

    def __rtruediv__(self, o):
        return _as_scalar(o)._binary(self, "div")

    def __neg__(self):
        return Scalar.exact(0)._binary(self, "sub")

    def __repr__(self):
        if self.kind == "exact":
            return f"Scalar.exact({self.re}, {self.im})"
        if self.kind == "tower":
            return f"Scalar.tower({self.to_complex()})"
        return f"Scalar.interval({self.ball})"

    def __str__(self):
        if self.lineage is not None:
            return expr_to_str(self.lineage)
        z = self.to_complex()
        return f"{z.real:.15g}{z.imag:+.15g}*i"


def complex_frac(s: Scalar) -> Tuple[Fraction, Fraction]:
    return s.re, s.im


def _gauss_op(a, b, tag):
    (ar, ai), (br, bi) = a, b
    if tag == "add":
        return ar + br, ai + bi
    if tag == "sub":
        return ar - br, ai - bi
    if tag == "mul":
        return ar * br - ai * bi, ar * bi + ai * br
    den = br * br + bi * bi
    if den == 0:
        raise ZeroDivisionError("division by exact zero")
    return (ar * br + ai * bi) / den, (ai * br - ar * bi) / den


def _gauss_expr(re: Fraction, im: Fraction):
    r = ("num", re)
    if im == 0:
        return r
    t = ("mul", ("num", im), ("i",))
    return ("add", r, t) if re != 0 else t


def _as_scalar(v) -> Scalar:
    if isinstance(v, Scalar):
        return v
    if isinstance(v, (int, Fraction)):
        return Scalar.exact(v)
    if isinstance(v, NFElem):
        return Scalar.from_elem(v)
    raise TypeError(f"cannot convert {type(v).__name__} to Scalar")


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def parse_scalar(text: str, precision: int = DEFAULT_PRECISION, exact_tower: bool = False) -> Scalar:
    """Parse a scalar expression.

    Gaussian rationals come back exact.  Other values come back as balls at
    ``precision`` bits carrying their lineage, or, with ``exact_tower=True``,
    as exact tower elements.
    """
    if precision < MIN_PRECISION:
        raise ValueError("precision must be at least 64 bits")
    e = parse_expr(text)
    uses_i, rads = collect_radicands(e)
    if not rads:
        K, imgs = tower_field(uses_i, ())
        g = _gaussian_of(eval_in_field(e, K, imgs)) if uses_i else (eval_in_field(e, QQ, {}).rational(), Fraction(0))
        return Scalar.exact(g[0], g[1], lineage=e)
    K, imgs = tower_field(uses_i, tuple(sorted(rads)))
    val = eval_in_field(e, K, imgs)
    g = _gaussian_of(val)
    if g is not None:
        return Scalar.exact(g[0], g[1], lineage=e)
    if exact_tower:
        return Scalar("tower", elem=val, lineage=e)
    return Scalar.from_ball(_ball(e, precision + 8), prec=precision, lineage=e)


def certify_sign(x: Scalar) -> str:
    """Return ``"zero"``, ``"nonzero"`` or ``"undecided"``."""
    if x.kind == "exact":
        return "zero" if x.re == 0 and x.im == 0 else "nonzero"
    if x.kind == "tower":
        return "zero" if x.elem.is_zero() else "nonzero"
    b = x.ball
    if not b.contains(0):
        return "nonzero"
    if b.is_exact() and b.is_zero():
        return "zero"
    return "undecided"


def escalate(x: Scalar, target_bits: int) -> Scalar:
    """Recompute ``x`` from its lineage at ``target_bits`` of precision."""
    if x.is_exact():
        return x
    if target_bits <= x.prec:
        raise ValueError("target precision must exceed the current precision")
    if x.lineage is None:
        raise LineageError("value has no recorded lineage; cannot escalate")
    new = _ball(x.lineage, target_bits + 8)
    if max(new.real.rad(), new.imag.rad()) > max(x.ball.real.rad(), x.ball.imag.rad()):
        new = x.ball
    return Scalar.from_ball(new, prec=target_bits, lineage=x.lineage)


def decide_sign(x: Scalar, cap: int = MAX_PRECISION) -> str:
    """Escalate until the sign is decided; raise :class:`UndecidedError` past ``cap``."""
    s = certify_sign(x)
    while s == "undecided":
        if x.lineage is None or x.prec * 2 > cap:
            raise UndecidedError(f"sign undecided at {x.prec} bits (cap {cap})")
        x = escalate(x, x.prec * 2)
        s = certify_sign(x)
    return s

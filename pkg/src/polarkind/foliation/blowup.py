"""Blow-up charts of 1-forms and Camacho-Sad indices by residues."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..numfield.field import NFElem, NumberField, _compose_shift, upoly_trim
from ..numfield.poly import Poly2
from ..numfield.scalar import Scalar
from ..puiseux.series import PuiseuxBranch, ps_inv, ps_mul
from ..puiseux.tree import InsufficientTruncation
from .form import FormError, OneForm

__all__ = [
    "Shift",
    "substitute_y",
    "blowup_form",
    "BlowupData",
    "blowup_chain",
    "camacho_sad_index",
    "cs_index_elem",
    "residue_at",
    "divisor_index_at",
]

# a shift eps(x) = sum c_k x^k, given as {k: c_k}
Shift = Dict[int, NFElem]

Terms = Dict[Tuple[int, int], NFElem]


def _shift_terms(shift, F: NumberField) -> Tuple[Shift, float]:
    """Normalize a shift argument to ``({k: c}, known_degree)``."""
    if shift is None:
        return {}, float("inf")
    if isinstance(shift, PuiseuxBranch):
        if shift.n != 1:
            raise FormError("the separatrix must be a smooth branch y = eta(x)")
        return {k: F(c) for k, c in shift.terms.items()}, shift.trunc_s
    if isinstance(shift, Poly2):
        if any(j for _, j in shift.terms):
            raise FormError("a shift must be a polynomial in x only")
        return {i: F(c) for (i, _), c in shift.terms.items()}, float("inf")
    return {k: F(c) for k, c in shift.items()}, float("inf")


def _field_of(w: OneForm, eps: Shift) -> NumberField:
    F = w.field
    for c in eps.values():
        if c.field is not F and c.field.is_extension_of(F):
            F = c.field
    return F


def _mul_trunc(a: Terms, b: Terms, xcap: Optional[int]) -> Terms:
    out: Terms = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            i = i1 + i2
            if xcap is not None and i > xcap:
                continue
            k = (i, j1 + j2)
            out[k] = out[k] + c1 * c2 if k in out else c1 * c2
    return {k: v for k, v in out.items() if not v.is_zero()}


def substitute_y(P: Poly2, eps: Shift, p: int, xcap: Optional[int] = None, F: Optional[NumberField] = None) -> Terms:
    """Terms of ``P(x, eps(x) + x^p t)`` as ``{(i, j): c}`` for ``x^i t^j``.

    With ``xcap`` the result is exact for ``x``-degrees up to ``xcap``.
    """
    F = F or P.field
    Y: Terms = {(k, 0): F(c) for k, c in eps.items() if not c.is_zero()}
    Y[(p, 1)] = F.one()
    powers: List[Terms] = [{(0, 0): F.one()}]
    out: Terms = {}
    for (i, j), c in sorted(P.terms.items(), key=lambda kv: kv[0][1]):
        if xcap is not None and i > xcap:
            continue
        while len(powers) <= j:
            powers.append(_mul_trunc(powers[-1], Y, xcap))
        c = F(c)
        for (a, b), d in powers[j].items():
            if xcap is not None and a + i > xcap:
                continue
            k = (a + i, b)
            out[k] = out[k] + c * d if k in out else c * d
    return {k: v for k, v in out.items() if not v.is_zero()}


def _deriv_x(eps: Shift) -> Shift:
    return {k - 1: c * k for k, c in eps.items() if k >= 1}


def _add(a: Terms, b: Terms) -> Terms:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _transform(w: OneForm, eps: Shift, p: int, xcap: Optional[int], F: NumberField) -> Tuple[Terms, Terms]:
    """Coefficients of ``dx`` and ``dt`` after ``y = eps(x) + x^p t``."""
    Ao = substitute_y(w.A, eps, p, xcap, F)
    Bo = substitute_y(w.B, eps, p, xcap, F)
    # dy = (eps' + p x^(p-1) t) dx + x^p dt
    dy_dx: Terms = {(k, 0): c for k, c in _deriv_x(eps).items() if not c.is_zero()}
    if p >= 1:
        dy_dx = _add(dy_dx, {(p - 1, 1): F(p)})
    Anew = _add(Ao, _mul_trunc(Bo, dy_dx, xcap))
    Bnew = {(i + p, j): c for (i, j), c in Bo.items() if xcap is None or i + p <= xcap}
    return Anew, Bnew


def _xorder(t: Terms) -> Optional[int]:
    return min((i for i, _ in t), default=None)


def blowup_form(w: OneForm, p: int, shift=None) -> Tuple[OneForm, int]:
    """Strict transform of ``w`` in the chart ``y = eps(x) + x^p t``.

    The returned form uses ``y`` for ``t``; the second value is the power of
    ``x`` divided out.  Exact for polynomial forms and shifts.
    """
    if w.truncated:
        raise FormError("blowup_form needs an exact polynomial form; use blowup_chain for series")
    F0 = w.field
    eps, known = _shift_terms(shift, F0)
    if known != float("inf"):
        raise FormError("blowup_form needs a finite shift")
    F = _field_of(w, eps)
    Anew, Bnew = _transform(w, eps, p, None, F)
    oa, ob = _xorder(Anew), _xorder(Bnew)
    cands = [o for o in (oa, None if ob is None else ob - 1) if o is not None]
    s = min(cands) if cands else 0
    s = max(s, 0)
    A = Poly2(F, {(i - s, j): c for (i, j), c in Anew.items()})
    B = Poly2(F, {(i - s, j): c for (i, j), c in Bnew.items()})
    return OneForm(A, B, check=False), s


@dataclass
class BlowupData:
    """Restriction of a chart transform to the divisor ``x = 0``.

    ``A0`` and ``B0`` are coefficient lists (low to high) of ``A^E(0, t)`` and
    ``B^E(0, t)``; ``s`` is the exceptional power divided out.  ``dicritical``
    is set when ``A^E(0, t)`` vanishes identically, i.e. the divisor is not
    invariant.
    """

    p: int
    A0: List[NFElem]
    B0: List[NFElem]
    s: int
    field: NumberField

    @property
    def dicritical(self) -> bool:
        return not self.A0

    def singular_points_poly(self) -> List[NFElem]:
        return self.A0


def blowup_chain(w: OneForm, p: int, shift=None) -> BlowupData:
    """``(A^E(0, t), B^E(0, t))`` on the divisor reached by ``y = eps(x) + x^p t``.

    ``shift`` is ``eps`` (a ``{k: c}`` map, an ``x``-polynomial or a smooth
    branch truncated below ``p`` by the caller).  ``p = 0`` leaves the form
    untouched and returns ``A(0, y)`` and ``B(0, y)``.
    """
    F0 = w.field
    eps, known = _shift_terms(shift, F0)
    F = _field_of(w, eps)
    if p == 0:
        A0 = upoly_trim([F(w.A.coeff(0, j)) for j in range(w.A.degree_y() + 1)]) if not w.A.is_zero() else []
        B0 = upoly_trim([F(w.B.coeff(0, j)) for j in range(w.B.degree_y() + 1)]) if not w.B.is_zero() else []
        return BlowupData(0, A0, B0, 0, F)
    trusted = float("inf")
    if w.truncated:
        trusted = w.truncation_degree
    if known != float("inf"):
        trusted = min(trusted, known)
    limit = max(w.A.total_degree(), w.B.total_degree(), 0) * max(p, max(eps, default=0), 1) + p + 2
    xcap = 2 * p + 4
    while True:
        cap = min(xcap, limit)
        Anew, Bnew = _transform(w, eps, p, cap, F)
        oa, ob = _xorder(Anew), _xorder(Bnew)
        cands = [o for o in (oa, None if ob is None else ob - 1) if o is not None]
        if cands and min(cands) + 1 <= cap:
            s = max(min(cands), 0)
            break
        if cap >= limit:
            raise FormError("the transformed form vanishes identically")
        xcap *= 2
    if s + 1 > trusted:
        raise InsufficientTruncation(f"blow-up at level {p} needs x-degree {s + 1}, data trusted to {trusted}")
    A0 = _row(Anew, s, F)
    B0 = _row(Bnew, s + 1, F)
    return BlowupData(p, A0, B0, s, F)


def _row(t: Terms, i: int, F: NumberField) -> List[NFElem]:
    row = {j: c for (a, j), c in t.items() if a == i}
    if not row:
        return []
    return upoly_trim([row.get(j, F.zero()) for j in range(max(row) + 1)])


# ---------------------------------------------------------------------------
# residues and indices
# ---------------------------------------------------------------------------


def residue_at(num: Sequence[NFElem], den: Sequence[NFElem], c: NFElem) -> NFElem:
    """``Res_{t=c} num/den`` for univariate polynomials (coefficient lists)."""
    F = c.field
    num = [F(a) for a in num]
    den = [F(a) for a in den]
    N = _compose_shift(num, c) if num else []
    D = _compose_shift(den, c)
    if not D:
        raise ZeroDivisionError("zero denominator")
    r = 0
    while r < len(D) and D[r].is_zero():
        r += 1
    if r == 0:
        return F.zero()
    Q = D[r:]
    inv = ps_inv(Q, r, F)
    prod = ps_mul(N + [F.zero()] * r, inv, r, F)
    return prod[r - 1]


def divisor_index_at(data: BlowupData, c: NFElem) -> NFElem:
    """Camacho-Sad index of the divisor ``x = 0`` at the point ``t = c``."""
    if data.dicritical:
        raise FormError("the divisor is not invariant")
    return -residue_at(data.B0, data.A0, c)


def cs_index_elem(w: OneForm, sep=None) -> NFElem:
    """Exact Camacho-Sad index of ``w`` along the smooth separatrix ``y = eta(x)``."""
    eps, known = _shift_terms(sep, w.field)
    F = _field_of(w, eps)
    trusted = known
    if w.truncated:
        trusted = min(trusted, w.truncation_degree)
    xcap = 8
    while True:
        Anew, Bnew = _transform(w, eps, 0, xcap, F)
        b0 = {i: c for (i, j), c in Bnew.items() if j == 0}
        if b0:
            m = min(b0)
            need = 2 * m + 1
            if xcap >= need:
                break
        limit = (max(w.A.total_degree(), w.B.total_degree()) + 1) * (max(eps, default=0) + 1) + 2
        if xcap > limit and not b0 and trusted == float("inf"):
            raise FormError("B vanishes along the separatrix: degenerate index")
        if xcap > trusted + 2 * (max(eps, default=0) + 1) + 64:
            raise InsufficientTruncation("cannot certify B along the separatrix")
        xcap *= 2
    top = min(xcap, trusted)
    a_row = {i: c for (i, j), c in Anew.items() if j == 0 and i <= top}
    if a_row:
        raise FormError(f"y = eta(x) is not a separatrix: A(x, eta) has a term x^{min(a_row)}")
    if need - 1 > trusted:
        raise InsufficientTruncation(f"index needs the separatrix to order {need - 1}, known to {trusted}")
    a1 = {i: c for (i, j), c in Anew.items() if j == 1}
    Bser = [b0.get(m + k, F.zero()) for k in range(m)]
    aser = [a1.get(k, F.zero()) for k in range(m)]
    inv = ps_inv(Bser, m, F)
    prod = ps_mul(aser, inv, m, F)
    return -prod[m - 1]


def camacho_sad_index(w: OneForm, sep=None) -> Scalar:
    """``-Res_0 a(x,0)/B(x,0)`` after moving the separatrix to ``y = 0``.

    ``sep`` is ``None`` for ``y = 0``, a smooth :class:`PuiseuxBranch`, an
    ``x``-polynomial or a ``{k: c}`` coefficient map for ``eta``.
    """
    return Scalar.from_elem(cs_index_elem(w, sep))

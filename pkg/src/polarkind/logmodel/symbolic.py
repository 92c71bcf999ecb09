"""Symbolic H-polynomials and discriminants for Puiseux divisors with a dead arc.

For such a divisor the ramified model has, on each associated divisor,

    H(v) = v^(n_E - 1) * sum_s W_s * prod_{j != s} (v^n_E - phi_j)

with ``b_E - 1`` distinct nonzero values ``phi_j`` and ``W_s`` the residue
sums, linear forms in ``lambda``.  These helpers expand ``H`` and its
discriminant with ``W_s`` (and optionally ``phi_j``) as free symbols.
"""

from __future__ import annotations

from typing import Optional, Sequence

import sympy

__all__ = ["dead_arc_h_polynomial", "dead_arc_discriminant", "dead_arc_discriminant_vanishes"]


def dead_arc_h_polynomial(n_E: int, b_E: int, phis: Optional[Sequence] = None):
    """``(H, v, W, phi)`` with ``H`` a sympy polynomial in ``v``.

    ``phis`` fixes the values ``phi_j``; by default they are symbols.
    """
    if n_E < 1 or b_E < 2:
        raise ValueError("need n_E >= 1 and b_E >= 2")
    k = b_E - 1
    v = sympy.Symbol("v")
    W = sympy.symbols(f"W1:{k + 1}")
    if phis is None:
        phi = sympy.symbols(f"phi1:{k + 1}")
    else:
        if len(phis) != k or len(set(phis)) != k or any(p == 0 for p in phis):
            raise ValueError(f"need {k} distinct nonzero values phi")
        phi = tuple(sympy.nsimplify(p) for p in phis)
    body = sum(W[s] * sympy.prod([v**n_E - phi[j] for j in range(k) if j != s]) for s in range(k))
    H = sympy.Poly(sympy.expand(v ** (n_E - 1) * body), v)
    return H, v, W, phi


def dead_arc_discriminant(n_E: int, b_E: int, phis: Optional[Sequence] = None):
    """Discriminant of ``H`` in ``v`` as an expanded polynomial in ``W`` (and ``phi``)."""
    H, v, W, phi = dead_arc_h_polynomial(n_E, b_E, phis)
    if H.degree() < 1:
        return sympy.Integer(1)
    if H.degree() == 1:
        return sympy.Integer(1)
    return sympy.expand(sympy.discriminant(H.as_expr(), v))


def dead_arc_discriminant_vanishes(n_E: int, b_E: int, phis: Optional[Sequence] = None) -> bool:
    """True when the discriminant is identically zero as a polynomial in ``W``."""
    return sympy.simplify(dead_arc_discriminant(n_E, b_E, phis)) == 0

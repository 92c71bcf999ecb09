"""Puiseux branches, branch types, coincidences and semigroups."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from ..numfield.field import NFElem, NumberField
from ..numfield.scalar import Scalar
from .tree import InsufficientTruncation, ExpansionError

__all__ = [
    "PuiseuxBranch",
    "BranchType",
    "EquisType",
    "coincidence",
    "branch_type",
    "equisingularity_type",
    "semigroup_generators",
    "intersection_multiplicity",
    "InconsistentTypeError",
]

INF = math.inf


class InconsistentTypeError(ValueError):
    """Equisingularity data that no curve can realise."""


# ---------------------------------------------------------------------------
# truncated power series over a number field, as coefficient lists
# ---------------------------------------------------------------------------


def ps_mul(a: List[NFElem], b: List[NFElem], n: int, F: NumberField) -> List[NFElem]:
    out = [F.zero() for _ in range(n)]
    for i, ai in enumerate(a[:n]):
        if ai.is_zero():
            continue
        for j in range(min(len(b), n - i)):
            bj = b[j]
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj
    return out


def ps_inv(a: List[NFElem], n: int, F: NumberField) -> List[NFElem]:
    inv0 = a[0].inverse()
    out = [inv0] + [F.zero() for _ in range(n - 1)]
    for k in range(1, n):
        acc = F.zero()
        for j in range(1, min(k, len(a) - 1) + 1):
            if not a[j].is_zero():
                acc = acc + a[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def newton_lift(poly: Dict[Tuple[int, int], NFElem], F: NumberField, order: int) -> List[NFElem]:
    """Solve ``g(T, Y(T)) = 0`` with ``Y(0) = 0`` modulo ``T^order``.

    ``g`` must have a nonzero ``Y`` coefficient at ``T = 0``.
    """
    deg_y = max(b for _, b in poly)
    rows: Dict[int, List[NFElem]] = {}
    for (a, b), c in poly.items():
        if a >= order:
            continue
        row = rows.setdefault(b, [F.zero() for _ in range(order)])
        row[a] = c
    Y = [F.zero() for _ in range(order)]
    prec = 1
    while prec < order:
        prec = min(2 * prec, order)
        # Horner evaluation of g and g_Y at Y modulo T^prec
        g = [F.zero() for _ in range(prec)]
        dg = [F.zero() for _ in range(prec)]
        for b in range(deg_y, -1, -1):
            row = rows.get(b)
            if b < deg_y:
                dg = _ps_add(ps_mul(dg, Y, prec, F), g)
            g = ps_mul(g, Y, prec, F)
            if row is not None:
                g = _ps_add(g, row[:prec])
        corr = ps_mul(g, ps_inv(dg, prec, F), prec, F)
        Y = _ps_add(Y[:prec], [-c for c in corr]) + Y[prec:]
    return Y[:order]


def _ps_add(a, b):
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        if k < len(a) and k < len(b):
            out.append(a[k] + b[k])
        elif k < len(a):
            out.append(a[k])
        else:
            out.append(b[k])
    return out


# ---------------------------------------------------------------------------
# branches
# ---------------------------------------------------------------------------


@dataclass
class PuiseuxBranch:
    """One complex branch ``y = sum a_s x^(s/n)``.

    ``terms`` stores the nonzero coefficients exactly; ``trunc_s`` is the largest
    ``s`` up to which the series is known (``inf`` for a finite exact series).
    ``shear`` records the coordinate change ``x -> x + shear*y`` applied before
    expansion (0 when none was needed).
    """

    n: int
    terms: Dict[int, NFElem]
    trunc_s: float
    field: NumberField
    label: str = ""
    shear: int = 0

    @property
    def coeffs(self) -> Dict[int, Scalar]:
        return {s: Scalar.from_elem(c) for s, c in sorted(self.terms.items())}

    def coefficient(self, s: int) -> NFElem:
        if s > self.trunc_s:
            raise InsufficientTruncation(f"coefficient s={s} beyond truncation {self.trunc_s} of branch {self.label}")
        return self.terms.get(s, self.field.zero())

    def leading_exponent(self) -> Fraction:
        if not self.terms:
            return Fraction(10**9) if self.trunc_s == INF else Fraction(int(self.trunc_s) + 1, self.n)
        return Fraction(min(self.terms), self.n)

    def conjugates(self) -> List["PuiseuxBranch"]:
        """The ``n`` conjugate series ``x^(1/n) -> zeta x^(1/n)`` (numerical twists).

        The returned objects carry complex-valued coefficients; they exist for
        display and tests.  Exact comparisons never use them.
        """
        out = []
        for k in range(self.n):
            out.append({s: c.to_complex() * cmath.exp(2j * math.pi * k * s / self.n) for s, c in self.terms.items()})
        return out

    def __str__(self):
        parts = []
        for s, c in sorted(self.terms.items()):
            e = Fraction(s, self.n)
            parts.append(f"({c})*x^({e})")
        tail = "" if self.trunc_s == INF else f" + O(x^({Fraction(int(self.trunc_s) + 1, self.n)}))"
        return (" + ".join(parts) if parts else "0") + tail


def _common_field(F1: NumberField, F2: NumberField) -> Optional[NumberField]:
    if F1 is F2 or F1.is_extension_of(F2) or F2.degree == 1:
        return F1
    if F2.is_extension_of(F1) or F1.degree == 1:
        return F2
    return None


def _twist_equal(a: NFElem, b: NFElem, m: int, N: int, G: Optional[NumberField]) -> Optional[bool]:
    """Decide ``a == b * zeta_N^m`` exactly (``None`` if undecidable)."""
    az, bz = a.is_zero(), b.is_zero()
    if az or bz:
        return az and bz
    if G is not None:
        r = a.lift(G) / b.lift(G)
        if not (r ** N - G.one()).is_zero():
            return False
        z = r.to_complex()
        j = round(cmath.phase(z) * N / (2 * math.pi)) % N
        return j == m % N
    # unrelated fields: certified numerical comparison
    from flint import acb

    for prec in (128, 256, 512, 1024, 2048):
        za = a.to_acb(prec)
        zb = b.to_acb(prec) * acb.exp_pi_i(acb(2 * m) / N)
        d = za - zb
        if not d.contains(0):
            return False
    return None


def _series_in_common_root(b: PuiseuxBranch, N: int) -> Tuple[Dict[int, NFElem], float]:
    u = N // b.n
    return {s * u: c for s, c in b.terms.items()}, b.trunc_s * u if b.trunc_s != INF else INF


def coincidence(b1: PuiseuxBranch, b2: PuiseuxBranch) -> Fraction:
    """Supremum over distinct conjugate pairs of the x-order of the difference."""
    N = b1.n * b2.n // math.gcd(b1.n, b2.n)
    s1, t1 = _series_in_common_root(b1, N)
    s2, t2 = _series_in_common_root(b2, N)
    trunc = min(t1, t2)
    G = _common_field(b1.field, b2.field)
    exps = sorted(set(s1) | set(s2))
    best: Optional[int] = None
    unresolved = False
    for k in range(N):
        first = None
        for e in exps:
            if e > trunc:
                break
            a = s1.get(e, b1.field.zero())
            b = s2.get(e, b2.field.zero())
            eq = _twist_equal(a, b, k * e, N, G)
            if eq is None:
                raise InsufficientTruncation(
                    f"coefficient comparison undecided at max precision between {b1.label} and {b2.label}"
                )
            if not eq:
                first = e
                break
        if first is None:
            if trunc == INF:
                continue  # identical series: the same conjugate
            unresolved = True
            continue
        if best is None or first > best:
            best = first
    if unresolved:
        raise InsufficientTruncation(
            f"branches {b1.label or '?'} and {b2.label or '?'} are not separated within the truncation"
        )
    if best is None:
        raise ExpansionError("coincidence of a smooth branch with itself is undefined")
    return Fraction(best, N)


# ---------------------------------------------------------------------------
# branch types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchType:
    """Characteristic exponents ``(beta_0, ..., beta_g)`` of a plane branch."""

    char_exponents: Tuple[int, ...]

    def __post_init__(self):
        beta = tuple(int(b) for b in self.char_exponents)
        object.__setattr__(self, "char_exponents", beta)
        if not beta or beta[0] < 1:
            raise InconsistentTypeError("beta_0 must be a positive integer")
        e = beta[0]
        for prev, b in zip(beta, beta[1:]):
            if b <= prev:
                raise InconsistentTypeError(f"characteristic exponents must increase: {beta}")
            g = math.gcd(e, b)
            if g == e:
                raise InconsistentTypeError(f"exponent {b} does not drop the gcd in {beta}")
            e = g
        if e != 1:
            raise InconsistentTypeError(f"gcd of {beta} is {e}, not 1")
        if len(beta) > 1 and beta[1] < beta[0]:
            raise InconsistentTypeError("x = 0 must be transversal: beta_1 >= beta_0")

    @classmethod
    def smooth(cls) -> "BranchType":
        return cls((1,))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[int, int]]) -> "BranchType":
        ns = [n for _, n in pairs]
        beta0 = reduce(lambda a, b: a * b, ns, 1)
        beta = [beta0]
        e = beta0
        for m, n in pairs:
            e //= n
            beta.append(m * e)
        return cls(tuple(beta))

    @property
    def genus(self) -> int:
        return len(self.char_exponents) - 1

    @property
    def multiplicity(self) -> int:
        return self.char_exponents[0]

    @property
    def gcds(self) -> List[int]:
        """``e_k = gcd(beta_0, ..., beta_k)``."""
        out, e = [], 0
        for b in self.char_exponents:
            e = math.gcd(e, b)
            out.append(e)
        return out

    @property
    def puiseux_pairs(self) -> List[Tuple[int, int]]:
        es = self.gcds
        return [(b // es[k], es[k - 1] // es[k]) for k, b in enumerate(self.char_exponents) if k > 0]

    @property
    def pair_ns(self) -> List[int]:
        return [n for _, n in self.puiseux_pairs]

    def exponents_as_fractions(self) -> List[Fraction]:
        b0 = self.char_exponents[0]
        return [Fraction(b, b0) for b in self.char_exponents[1:]]

    def is_smooth(self) -> bool:
        return self.char_exponents == (1,)

    def __str__(self):
        return "(" + ",".join(map(str, self.char_exponents)) + ")"


def branch_type(b: PuiseuxBranch) -> BranchType:
    """Characteristic exponents read off the series by the gcd chain."""
    beta = [b.n]
    e = b.n
    for s in sorted(b.terms):
        if e == 1:
            break
        if s > b.trunc_s:
            break
        if s % e:
            beta.append(s)
            e = math.gcd(e, s)
    if e != 1:
        if b.trunc_s == INF:
            raise ExpansionError(f"series of branch {b.label} is not primitive (gcd {e})")
        raise InsufficientTruncation(f"branch {b.label} unresolved: gcd chain stops at {e} within s <= {b.trunc_s}")
    return BranchType(tuple(beta))


def semigroup_generators(t: BranchType) -> List[int]:
    """Minimal generators of the value semigroup of a branch of type ``t``."""
    beta = t.char_exponents
    ns = t.pair_ns
    gens = [beta[0]]
    if len(beta) > 1:
        gens.append(beta[1])
    for q in range(1, len(beta) - 1):
        gens.append(ns[q - 1] * gens[q] + beta[q + 1] - beta[q])
    return gens


def intersection_multiplicity(gamma: BranchType, delta_m0: int, coinc) -> int:
    """Intersection multiplicity of a branch of type ``gamma`` with a branch of
    multiplicity ``delta_m0`` at coincidence ``coinc``."""
    coinc = Fraction(coinc)
    beta = gamma.char_exponents
    alpha = coinc * beta[0]
    if alpha < beta[0]:
        raise InconsistentTypeError(f"coincidence {coinc} is below 1 (tangency with x = 0)")
    q = max(k for k in range(len(beta)) if beta[k] <= alpha)
    gens = semigroup_generators(gamma)
    ns = gamma.pair_ns
    prod_before = math.prod(ns[: max(q - 1, 0)])
    prod_upto = math.prod(ns[:q])
    val = delta_m0 * (Fraction(gens[q], prod_before) + (alpha - beta[q]) / prod_upto)
    if val.denominator != 1 or val <= 0:
        raise InconsistentTypeError(
            f"non-admissible coincidence {coinc} for type {gamma} and multiplicity {delta_m0}: value {val}"
        )
    return int(val)


# ---------------------------------------------------------------------------
# equisingularity types
# ---------------------------------------------------------------------------


@dataclass
class EquisType:
    """Branch types plus the symmetric coincidence matrix."""

    branches: List[BranchType]
    coincidence: List[List[Optional[Fraction]]] = field(default_factory=list)

    def __post_init__(self):
        r = len(self.branches)
        if not self.coincidence:
            self.coincidence = [[None] * r for _ in range(r)]
        self.coincidence = [
            [None if (i == j or c is None) else Fraction(c) for j, c in enumerate(row)]
            for i, row in enumerate(self.coincidence)
        ]
        self.validate()

    @property
    def r(self) -> int:
        return len(self.branches)

    def coinc(self, i: int, j: int) -> Fraction:
        return self.coincidence[i][j]

    def validate(self) -> None:
        r = self.r
        if len(self.coincidence) != r or any(len(row) != r for row in self.coincidence):
            raise InconsistentTypeError("coincidence matrix has the wrong shape")
        for i, j in combinations(range(r), 2):
            a, b = self.coincidence[i][j], self.coincidence[j][i]
            if a is None or a != b:
                raise InconsistentTypeError(f"coincidence matrix not symmetric at ({i},{j})")
            if a < 1:
                raise InconsistentTypeError(f"coincidence {a} < 1 at ({i},{j})")
            _check_pair(self.branches[i], self.branches[j], a, (i, j))
        for i, j, k in combinations(range(r), 3):
            vals = sorted([self.coincidence[i][j], self.coincidence[i][k], self.coincidence[j][k]])
            if vals[0] != vals[1]:
                raise InconsistentTypeError(f"ultrametric condition fails for branches {i},{j},{k}: {vals}")

    def multiplicity(self) -> int:
        return sum(b.multiplicity for b in self.branches)

    def permuted(self, order: Sequence[int]) -> "EquisType":
        return EquisType(
            [self.branches[i] for i in order],
            [[self.coincidence[i][j] for j in order] for i in order],
        )

    def restrict(self, idx: Sequence[int]) -> "EquisType":
        return self.permuted(list(idx))

    def canonical(self) -> tuple:
        """Order-independent key: the ultrametric tree with branch types at the leaves."""
        return _tree_key(self, list(range(self.r)))

    def __eq__(self, other):
        if not isinstance(other, EquisType):
            return NotImplemented
        return self.r == other.r and self.canonical() == other.canonical()

    def __str__(self):
        bs = ", ".join(str(b) for b in self.branches)
        rows = []
        for i, j in combinations(range(self.r), 2):
            rows.append(f"C({i},{j})={self.coincidence[i][j]}")
        return f"branches [{bs}]" + ("; " + ", ".join(rows) if rows else "")


def _tree_key(e: EquisType, idx: List[int]) -> tuple:
    if len(idx) == 1:
        return ("b", e.branches[idx[0]].char_exponents)
    cmin = min(e.coincidence[i][j] for i, j in combinations(idx, 2))
    groups: List[List[int]] = []
    for i in idx:
        for g in groups:
            if e.coincidence[i][g[0]] > cmin:
                g.append(i)
                break
        else:
            groups.append([i])
    return ("n", cmin, tuple(sorted((_tree_key(e, g) for g in groups), key=repr)))


def _check_pair(t1: BranchType, t2: BranchType, c: Fraction, where) -> None:
    """A coincidence must be compatible with both branch types."""
    e1 = [x for x in t1.exponents_as_fractions() if x < c]
    e2 = [x for x in t2.exponents_as_fractions() if x < c]
    if e1 != e2:
        raise InconsistentTypeError(
            f"branches {where} share coincidence {c} but differ in characteristic exponents below it"
        )
    if not (_allowed(t1, c) or _allowed(t2, c)):
        raise InconsistentTypeError(f"coincidence {c} at {where} is not an admissible exponent for either branch")


def _allowed(t: BranchType, c: Fraction) -> bool:
    """Is ``x^c`` an exponent a series of type ``t`` may carry?"""
    beta = t.char_exponents
    b0 = beta[0]
    s = c * b0
    if s.denominator != 1:
        return False
    s = int(s)
    es = t.gcds
    k = max(i for i in range(len(beta)) if beta[i] <= s) if s >= beta[0] else 0
    return s % es[k] == 0 or s in beta


def equisingularity_type(branches: Sequence[PuiseuxBranch]) -> EquisType:
    """EquisType of a list of pairwise distinct branches."""
    types = [branch_type(b) for b in branches]
    r = len(branches)
    mat = [[None] * r for _ in range(r)]
    for i, j in combinations(range(r), 2):
        c = coincidence(branches[i], branches[j])
        mat[i][j] = mat[j][i] = c
    return EquisType(types, mat)

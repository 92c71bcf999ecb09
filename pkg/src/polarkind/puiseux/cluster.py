"""Minimal embedded resolution of a curve with a given equisingularity type.

The resolution is computed by blowing up explicit parametrisations: each
branch of a representative curve ``x = t^n, y = sum a_s t^s`` (rational
coefficients, generic enough to realise the requested coincidences) is carried
through the charts of every blow-up.  All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Dict, List, Optional, Sequence, Tuple

from .series import BranchType, EquisType, InconsistentTypeError, PuiseuxBranch, _allowed, equisingularity_type
from ..numfield.field import QQ

__all__ = [
    "Divisor",
    "ClusterPoint",
    "Resolution",
    "representative_series",
    "resolve",
    "infinitely_near_multiplicities",
]


# ---------------------------------------------------------------------------
# representative parametrisations
# ---------------------------------------------------------------------------


def _allowed_exponents(t: BranchType, upto: Fraction) -> List[int]:
    n = t.multiplicity
    return [s for s in range(n, int(upto * n) + 1) if _allowed(t, Fraction(s, n))]


def representative_series(e: EquisType, extra: Fraction = Fraction(1)) -> List[Tuple[int, Dict[int, Fraction]]]:
    """Rational parametrisations ``(n, {s: a_s})`` realising the EquisType ``e``.

    Every admissible exponent up to the largest relevant one (plus ``extra``)
    receives a coefficient; fresh coefficients are distinct positive integers so
    that no twist by a root of unity can make two of them agree.
    """
    r = e.r
    top = Fraction(1)
    for t in e.branches:
        top = max(top, *(t.exponents_as_fractions() or [Fraction(1)]))
    for i in range(r):
        for j in range(r):
            if i != j:
                top = max(top, e.coinc(i, j))
    top += extra
    fresh = count(1)
    out: List[Tuple[int, Dict[int, Fraction]]] = []
    for i, t in enumerate(e.branches):
        n = t.multiplicity
        allowed = _allowed_exponents(t, top)
        if i == 0:
            out.append((n, {s: Fraction(next(fresh)) for s in allowed}))
            continue
        j = max(range(i), key=lambda k: (e.coinc(i, k), -k))
        c = e.coinc(i, j)
        nj, sj = out[j]
        terms: Dict[int, Fraction] = {}
        below_i = {Fraction(s, n) for s in allowed if Fraction(s, n) < c}
        below_j = {Fraction(s, nj) for s in sj if Fraction(s, nj) < c}
        if below_i != below_j:
            raise InconsistentTypeError(
                f"branch {i} cannot share the expansion of branch {j} below coincidence {c}"
            )
        for s in allowed:
            q = Fraction(s, n)
            if q < c:
                terms[s] = sj[int(q * nj)]
            else:
                terms[s] = Fraction(next(fresh))
        cs = c * n
        if cs.denominator != 1 or int(cs) not in terms:
            # branch i has no term at c: the other branch must
            cj = c * nj
            if cj.denominator != 1 or int(cj) not in sj:
                raise InconsistentTypeError(f"coincidence {c} of branches {i},{j} is not realisable")
        out.append((n, terms))
    return out


def representative_branches(e: EquisType) -> List[PuiseuxBranch]:
    reps = representative_series(e)
    return [
        PuiseuxBranch(n, {s: QQ(a) for s, a in terms.items()}, math.inf, QQ, f"R{i + 1}")
        for i, (n, terms) in enumerate(reps)
    ]


# ---------------------------------------------------------------------------
# blow-ups of parametrisations
# ---------------------------------------------------------------------------


class _PrecisionLost(Exception):
    pass


@dataclass
class _Param:
    """``(X(t), Y(t))`` known modulo ``t^prec``."""

    X: List[Fraction]
    Y: List[Fraction]
    prec: int

    def ord(self, S: List[Fraction]) -> int:
        for k in range(self.prec):
            if S[k]:
                return k
        return self.prec  # at least this large

    def orders(self) -> Tuple[int, int]:
        return self.ord(self.X), self.ord(self.Y)


def _div(A: List[Fraction], B: List[Fraction], b: int, prec: int) -> Tuple[List[Fraction], int]:
    """``A / B`` where ``B`` has order ``b``; result known modulo ``t^(prec-b)``."""
    newprec = prec - b
    if newprec <= 0:
        raise _PrecisionLost()
    A2 = A[b:prec] + [Fraction(0)] * b
    B2 = B[b:prec]
    inv0 = 1 / B2[0]
    out = [Fraction(0)] * newprec
    # long division: out * B2 = A2
    for k in range(newprec):
        acc = A2[k]
        for j in range(1, min(k, len(B2) - 1) + 1):
            if B2[j] and out[k - j]:
                acc -= B2[j] * out[k - j]
        out[k] = acc * inv0
    return out, newprec


def _blow(p: _Param) -> Tuple[object, _Param]:
    """Blow up the origin; returns (point key on the new divisor, new parametrisation).

    The key is a Fraction ``c`` for the point ``y/x = c`` or ``"inf"``.
    In both charts the new divisor is ``{x' = 0}``.
    """
    ox, oy = p.orders()
    if min(ox, oy) >= p.prec - 1:
        raise _PrecisionLost()
    if ox <= oy:
        c = p.Y[ox] / p.X[ox] if oy == ox else Fraction(0)
        Yn, prec = _div(p.Y, p.X, ox, p.prec)
        Yn[0] -= c
        return c, _Param(p.X[:prec], Yn, prec)
    Xn, prec = _div(p.X, p.Y, oy, p.prec)
    return "inf", _Param(p.Y[:prec], Xn, prec)


@dataclass
class Divisor:
    id: int
    v: Fraction
    m: int
    self_intersection: int
    created_at: int  # cluster point id
    satellite: bool
    through: Tuple[int, ...]  # divisors through the blown-up point
    curvette_exponents: Tuple[Fraction, ...]

    @property
    def is_puiseux(self) -> bool:
        return self.satellite

    @property
    def n_E(self) -> int:
        if not self.satellite:
            return 1
        return self.m // self.n_under

    @property
    def n_under(self) -> int:
        if not self.satellite:
            return self.m
        lcm = 1
        for q in self.curvette_exponents[:-1]:
            lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
        return lcm

    @property
    def k_E(self) -> int:
        g = len(self.curvette_exponents)
        return g - 1 if self.satellite else g


@dataclass
class ClusterPoint:
    """An infinitely near point that the minimal resolution blows up."""

    id: int
    parent: Optional[int]
    level: int
    on_divisors: Tuple[int, ...]
    branch_mult: Dict[int, int]
    divisor: int = 0  # id of the divisor created by blowing it up
    children: List[int] = field(default_factory=list)
    passive_mult: Dict[int, int] = field(default_factory=dict)

    @property
    def multiplicity(self) -> int:
        return sum(self.branch_mult.values())

    @property
    def is_free(self) -> bool:
        return len(self.on_divisors) <= 1

    def __str__(self):
        return f"p{self.id}(m={self.multiplicity}, level={self.level})"


@dataclass
class PassiveExit:
    """Where a passively carried branch leaves the blown-up cluster.

    ``point`` identifies the point (blown-up parent, position on the divisor);
    ``meets`` lists active branches through the same point and
    ``divisor_intersection`` is the local intersection number with ``divisor``.
    """

    divisor: int
    on_divisors: Tuple[int, ...]
    meets: Tuple[int, ...]
    point: Tuple[int, object]
    divisor_intersection: int

    @property
    def at_corner(self) -> bool:
        return len(self.on_divisors) >= 2


@dataclass
class Resolution:
    divisors: List[Divisor]
    edges: List[Tuple[int, int]]
    arrows: Dict[int, int]  # branch index -> divisor id
    points: List[ClusterPoint]
    branch_points: Dict[int, List[int]]  # branch -> blown-up points it passes through
    etype: EquisType
    passive_final: Dict[int, "PassiveExit"] = field(default_factory=dict)

    def divisor(self, i: int) -> Divisor:
        return self.divisors[i - 1]

    def multiplicity_sequence(self, branch: int) -> List[int]:
        return [self.points[p].branch_mult[branch] for p in self.branch_points[branch]]


def resolve(e: EquisType, check: bool = True, active: Optional[Sequence[int]] = None) -> Resolution:
    """Minimal embedded resolution of a curve of type ``e`` (exact simulation).

    With ``active`` given, only those branches drive the blow-ups; the other
    branches are carried along passively, recording their multiplicities at
    the blown-up points and the point where they finally leave the cluster.
    """
    reps = representative_series(e)
    if check:
        got = equisingularity_type(representative_branches(e)) if e.r else e
        if got != e:
            raise InconsistentTypeError(f"could not realise the type {e}; representatives give {got}")
    scale = 4
    while True:
        try:
            return _simulate(e, reps, scale, None if active is None else set(active))
        except _PrecisionLost:
            scale *= 2
            if scale > 256:
                raise


def _simulate(e: EquisType, reps, scale: int, active: Optional[set] = None) -> Resolution:
    params: Dict[int, _Param] = {}
    for i, (n, terms) in enumerate(reps):
        prec = scale * (max(terms) + 2 * n) + 16
        X = [Fraction(0)] * prec
        X[n] = Fraction(1)
        Y = [Fraction(0)] * prec
        for s, a in terms.items():
            if s < prec:
                Y[s] = a
        params[i] = _Param(X, Y, prec)
    divisors: List[Divisor] = []
    edges: set = set()
    arrows: Dict[int, int] = {}
    points: List[ClusterPoint] = []
    branch_points: Dict[int, List[int]] = {i: [] for i in range(e.r)}
    passive_final: Dict[int, PassiveExit] = {}
    if active is None:
        active = set(range(e.r))

    def mult(p: _Param) -> int:
        return min(p.orders())

    root = ClusterPoint(
        0, None, 0, (),
        {i: mult(params[i]) for i in params if i in active},
        passive_mult={i: mult(params[i]) for i in params if i not in active},
    )
    points.append(root)
    # queue entries: (point id, {branch: param}, x-role divisor, y-role divisor)
    queue = [(0, dict(params), None, None)]
    while queue:
        pid, brs, dx, dy = queue.pop(0)
        pt = points[pid]
        for b in brs:
            branch_points[b].append(pid)
        through = tuple(d for d in (dx, dy) if d is not None)
        Eid = len(divisors) + 1
        if not through:
            v, m, exps, sat = Fraction(1), 1, (), False
        elif len(through) == 1:
            D = divisors[through[0] - 1]
            v, m, exps, sat = D.v + Fraction(1, D.m), D.m, D.curvette_exponents, False
        else:
            D1, D2 = divisors[through[0] - 1], divisors[through[1] - 1]
            m = D1.m + D2.m
            v = (D1.m * D1.v + D2.m * D2.v) / m
            pre = []
            for a, b in zip(D1.curvette_exponents, D2.curvette_exponents):
                if a != b:
                    break
                pre.append(a)
            exps, sat = tuple(pre) + (v,), True
        for d in through:
            divisors[d - 1].self_intersection -= 1
            edges.add(frozenset((d, Eid)))
        if len(through) == 2:
            edges.discard(frozenset(through))
        E = Divisor(Eid, v, m, -1, pid, sat, through, exps)
        divisors.append(E)
        pt.divisor = Eid
        # distribute branches over points of the new divisor
        groups: Dict[object, Dict[int, _Param]] = {}
        for b, prm in brs.items():
            key, newp = _blow(prm)
            groups.setdefault(key, {})[b] = newp
        for key in sorted(groups, key=lambda k: (k == "inf", k if k != "inf" else 0)):
            sub = groups[key]
            ndy = dy if key == 0 else (dx if key == "inf" else None)
            on = tuple(d for d in (Eid, ndy) if d is not None)
            act = {b: p for b, p in sub.items() if b in active}
            bm = {b: mult(p) for b, p in act.items()}
            corner = ndy is not None
            blow = bool(act) and (corner or len(act) >= 2 or sum(bm.values()) >= 2)
            if act and not blow:
                (b, p), = act.items()
                ox, oy = p.orders()
                blow = ox > oy  # smooth branch tangent to the new divisor {x' = 0}
            if blow:
                pm = {b: mult(p) for b, p in sub.items() if b not in active}
                q = ClusterPoint(len(points), pid, pt.level + 1, on, bm, passive_mult=pm)
                points.append(q)
                pt.children.append(q.id)
                queue.append((q.id, sub, Eid, ndy))
            else:
                for b in act:
                    arrows[b] = Eid
                for b, p in sub.items():
                    if b not in active:
                        passive_final[b] = PassiveExit(Eid, on, tuple(sorted(act)), (pid, key), p.orders()[0])
    return Resolution(
        divisors,
        sorted(tuple(sorted(x)) for x in edges),
        arrows,
        points,
        branch_points,
        e,
        passive_final,
    )


def infinitely_near_multiplicities(e: EquisType) -> Resolution:
    """Cluster of infinitely near points blown up by the minimal resolution.

    Each :class:`ClusterPoint` carries the multiplicity of every branch through
    it; ``multiplicity`` is their sum, the multiplicity of the curve there.
    """
    return resolve(e)

"""Generic polar curves, the resolution test and the G*-membership checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..dualgraph.graph import DualGraph, build_dual_graph
from ..numfield.field import NFElem, upoly_divmod, upoly_trim
from ..numfield.poly import Poly2
from ..puiseux.germ import BivariateGerm, LabeledType, joint_equisingularity, newton_polygon
from ..puiseux.series import EquisType
from ..puiseux.tree import ExpansionError, InsufficientTruncation
from .blowup import blowup_chain, divisor_index_at
from .charts import chart_vertices, pull_curve, ramification_order, ramified_components
from .form import Direction, FormError, OneForm, polar_curve, pullback_form
from .polygon import foliation_polygon

__all__ = [
    "SamplingPolicy",
    "SamplingError",
    "PolarResult",
    "generic_polar_equisingularity",
    "sample_directions",
    "is_resolved_by",
    "GStarReport",
    "gstar_check",
]

DEFAULT_SEED = 20240229


class SamplingError(RuntimeError):
    """Direction samples disagree, or no admissible direction was found."""


@dataclass
class SamplingPolicy:
    samples: int = 3
    seed: int = DEFAULT_SEED
    max_attempts: int = 40
    height: int = 97


def sample_directions(policy: SamplingPolicy) -> List[Direction]:
    """Deterministic stream of rational directions ``[1 : b]`` and ``[a : 1]``."""
    rng = random.Random(policy.seed)
    out = []
    for _ in range(policy.max_attempts):
        a = Fraction(rng.randint(1, policy.height), rng.randint(1, policy.height // 2 + 1))
        b = Fraction(rng.choice([-1, 1]) * rng.randint(1, policy.height), rng.randint(1, policy.height // 2 + 1))
        out.append(Direction(a, b))
    return out


def _curve_poly(c) -> Poly2:
    if isinstance(c, BivariateGerm):
        if c.truncated:
            raise ExpansionError("the curve C must be given by an exact polynomial")
        return c.poly
    if isinstance(c, Poly2):
        return c
    raise TypeError("C must be given as a germ or polynomial (an EquisType carries no analytic data)")


def _admissible(w: OneForm, gamma: Poly2) -> bool:
    # no tracked coefficient may cancel: the polar's support is the union of supports
    return set(gamma.terms) == set(w.A.terms) | set(w.B.terms)


@dataclass
class PolarResult:
    """Outcome of direction sampling: ``gamma`` is ``eps(Gamma)`` and ``union``
    the labelled type of ``Gamma u C`` (labels ``G*`` and ``C*``)."""

    gamma: EquisType
    union: LabeledType
    directions: List[Direction]
    transcript: List[str] = field(default_factory=list)

    def graph(self) -> DualGraph:
        return build_dual_graph(self.union)


def _union_key(lt: LabeledType):
    return build_dual_graph(lt).canonical_key()


def generic_polar_equisingularity(w: OneForm, c, policy: Optional[SamplingPolicy] = None,
                                  curve_parts: Optional[Sequence[Poly2]] = None,
                                  ramify: Optional[int] = None) -> PolarResult:
    """``eps(Gamma)`` and ``eps(Gamma u C)`` for generic directions ``[a:b]``.

    ``k`` admissible rational directions are drawn from a seeded generator;
    the answer is returned only when all of them agree.  ``curve_parts``
    optionally splits ``C`` into several curves labelled ``C``.  With
    ``ramify = n`` the polar and the curve are pulled back by ``x = u^n``
    before the joint type is computed.
    """
    policy = policy or SamplingPolicy()
    if w.truncated:
        raise ExpansionError("generic polars need an exact polynomial form")
    C = _curve_poly(c)
    parts = list(curve_parts) if curve_parts else [C]
    if ramify:
        parts = [pull_curve(P, ramify) for P in parts]
    transcript: List[str] = []
    results: List[Tuple[Direction, EquisType, LabeledType]] = []
    for d in sample_directions(policy):
        if len(results) == policy.samples:
            break
        try:
            g = polar_curve(w, d)
        except FormError:
            transcript.append(f"{d}: polar vanishes, rejected")
            continue
        if not _admissible(w, g.poly):
            transcript.append(f"{d}: cancels a coefficient, rejected")
            continue
        try:
            if ramify:
                g = BivariateGerm.from_poly(pull_curve(g.poly, ramify))
            lt = joint_equisingularity([("G", g)] + [("C", BivariateGerm.from_poly(P)) for P in parts])
        except (ExpansionError, AssertionError) as exc:
            transcript.append(f"{d}: rejected ({exc})")
            continue
        results.append((d, lt.part("G").etype, lt))
        transcript.append(f"{d}: accepted")
    if len(results) < policy.samples:
        raise SamplingError(f"only {len(results)} admissible directions in {policy.max_attempts} attempts")
    ref_gamma, ref_key = results[0][1], _union_key(results[0][2])
    for d, ge, lt in results[1:]:
        if ge != ref_gamma or _union_key(lt) != ref_key:
            raise SamplingError(
                f"non-generic or insufficient sampling: {results[0][0]} gives {ref_gamma}, {d} gives {ge}"
            )
    return PolarResult(ref_gamma, results[0][2], [r[0] for r in results], transcript)


def is_resolved_by(union: LabeledType, curve: str = "C") -> bool:
    """True when the minimal resolution of ``C`` also resolves ``C u Gamma``:
    the two dual graphs have the same number of vertices."""
    return len(build_dual_graph(union).vertices) == len(build_dual_graph(union.part(curve)).vertices)


# ---------------------------------------------------------------------------
# membership in G*_C
# ---------------------------------------------------------------------------


@dataclass
class GStarReport:
    """Three-valued verdict of the computable G* conditions.

    ``verdict`` is ``"pass"``, ``"fail"`` or ``"undetermined"``; ``reasons``
    name the failed (or unverifiable) condition.
    """

    verdict: str
    reasons: List[str] = field(default_factory=list)
    n: int = 1
    corner_indices: Dict[Tuple[int, int], NFElem] = field(default_factory=dict)

    def __bool__(self):
        return self.verdict == "pass"


def _only_roots(A0: List[NFElem], pts: List[NFElem]) -> bool:
    """``A0`` is a constant times a product of ``(t - c)`` with ``c`` in ``pts``."""
    rest = upoly_trim(list(A0))
    if not rest:
        return False
    F = rest[0].field
    for c in pts:
        lin = [-F(c), F.one()]
        while len(rest) > 1:
            q, r = upoly_divmod(rest, lin)
            if r:
                break
            rest = q
    return len(rest) == 1


def gstar_check(w: OneForm, curve_parts: Sequence[Poly2], n: Optional[int] = None) -> GStarReport:
    """Necessary conditions for ``w`` to lie in G*_C, ``C = prod(curve_parts)``.

    * the Newton polygons of the foliation and of ``C`` coincide;
    * ``B`` contributes to the highest vertex of every side of integer inclination;
    * along the resolution of ``rho^{-1} C`` (``rho: x = u^n``, ``n`` the
      smallest order making every branch smooth) each divisor is invariant,
      its singular points are the points of ``rho^{-1} C`` and the corners,
      and no corner has Camacho-Sad index ``-1``.
    """
    parts = list(curve_parts)
    reasons: List[str] = []
    C = parts[0]
    for P in parts[1:]:
        C = C * P
    if w.truncated:
        return GStarReport("undetermined", ["series forms are not supported by the divisor checks"])
    PF = foliation_polygon(w)
    PC = newton_polygon(C)
    if PF.polygon != PC:
        reasons.append(f"foliation polygon {PF.polygon} differs from the curve polygon {PC}")
    for s, (mu, _) in enumerate(PF.sides):
        if mu.denominator == 1 and not PF.has_B(PF.vertices[s]):
            reasons.append(f"no contribution of B at the highest vertex of the side mu={mu}")
    if n is None:
        n = ramification_order(parts)
    W = pullback_form(w, n)
    try:
        comps = ramified_components(parts, n)
    except InsufficientTruncation as exc:
        return GStarReport("undetermined", reasons + [str(exc)], n)
    branches = [b for _, b in comps]
    K = branches[0].field
    if K is not W.field and K.is_extension_of(W.field):
        W = W.lift(K)
    verts = chart_vertices(branches)
    corner: Dict[Tuple[int, int], NFElem] = {}
    for V in verts:
        try:
            data = blowup_chain(W, V.p, V.prefix)
        except InsufficientTruncation as exc:
            return GStarReport("undetermined", reasons + [str(exc)], n, corner)
        if data.dicritical:
            reasons.append(f"divisor at level {V.p} is not invariant (dicritical)")
            continue
        pts = [c for c, _ in V.points]
        if not _only_roots(data.A0, pts):
            reasons.append(f"divisor at level {V.p} carries singular points off the curve")
        for k in V.corner_points():
            c = V.points[k][0]
            # the index read in this chart drops by one after the corner is blown up
            idx = divisor_index_at(data, c) - 1
            corner[(V.id, k)] = idx
            if idx == -1:
                reasons.append(f"corner at level {V.p}, t={c}: Camacho-Sad index -1")
    return GStarReport("fail" if reasons else "pass", reasons, n, corner)

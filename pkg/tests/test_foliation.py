import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from polarkind.foliation import (
    Direction,
    FormError,
    OneForm,
    SamplingError,
    SamplingPolicy,
    b_contribution_highest_vertex,
    blowup_chain,
    camacho_sad_index,
    chart_vertices,
    divisor_index_at,
    finiteness_region,
    foliation_polygon,
    generic_polar_equisingularity,
    gstar_check,
    is_resolved_by,
    nu0,
    parse_form,
    polar_curve,
    polar_polygon_bound,
    pull_curve,
    pullback_form,
    ramified_components,
)
from polarkind.logmodel import logarithmic_form
from polarkind.numfield import Poly2, parse_polys
from polarkind.numfield.field import upoly_divmod, upoly_gcd, upoly_trim
from polarkind.puiseux import newton_polygon

from helpers import poly, polys, product

OMEGA1 = "-11*x^10 dx + 5*y^4 dy"


def test_polar_examples():
    w = parse_form("d(y^2-x^3)")
    assert polar_curve(w, Direction(0, 1)).poly == poly("2*y")
    assert polar_curve(w, Direction(1, 1)).poly == poly("2*y-3*x^2")
    w1 = parse_form(OMEGA1)
    assert polar_curve(w1, Direction(2, 3)).poly == poly("-22*x^10+15*y^4")


def test_polar_zero_rejected():
    with pytest.raises(FormError):
        polar_curve(parse_form("y dx - y dy"), Direction(1, 1))


def test_form_must_be_singular():
    with pytest.raises(FormError):
        parse_form("dx + x dy")


def test_foliation_polygons():
    P = foliation_polygon(parse_form("d(y^5-x^11)"))
    assert P.vertices == ((0, 5), (11, 0))
    assert foliation_polygon(parse_form("d(y^2-x^3)")).vertices == ((0, 2), (3, 0))
    parts = polys("y", "y-x^2", "y+x^2")
    L = logarithmic_form(parts, [2, 3, 5])
    assert foliation_polygon(L).polygon == newton_polygon(product(parts))


def test_polar_bound_examples():
    w = parse_form("d(y^2-x^3)")
    r = polar_polygon_bound(w, Direction(1, 1))
    assert r.ok and r.checked_sides == [(F(3, 2), F(3))]
    assert ((F(3, 2), F(3)), (0, 1)) in r.tight
    assert polar_polygon_bound(parse_form("d(y^5-x^11)"), Direction(1, 1)).ok
    assert polar_polygon_bound(w, Direction(1, 0)).ok


def _random_hamiltonian(rng):
    terms = []
    for _ in range(rng.randint(2, 6)):
        i = rng.randint(0, 10)
        j = rng.randint(0, 10 - i)
        if i + j >= 2:
            terms.append(f"{rng.choice([-3, -2, -1, 1, 2, 3])}*x^{i}*y^{j}")
    terms.append(f"y^{rng.randint(2, 6)}")
    terms.append(f"x^{rng.randint(2, 10)}")
    return "+".join(terms).replace("+-", "-")


def test_polar_bound_on_random_hamiltonian_forms():
    rng = random.Random(11)
    refined = 0
    for _ in range(100):
        w = parse_form(f"d({_random_hamiltonian(rng)})")
        d = Direction(F(rng.randint(1, 9)), F(rng.randint(1, 9)))
        r = polar_polygon_bound(w, d)
        assert r.ok, str(r)
        refined += any(mu > 1 for mu, _ in r.checked_sides)
    assert refined > 50


def test_b_contribution():
    assert b_contribution_highest_vertex(parse_form("d(y^2-x^3)"), 0)
    assert not b_contribution_highest_vertex(parse_form("y^2 dx + x^3 dy"), 0)
    assert b_contribution_highest_vertex(OneForm(Poly2.from_dict(poly("y").field, {}), poly("y"), check=False), 0)


def test_pullbacks():
    w = parse_form("d(y^2-x^3)")
    assert pullback_form(w, 1) == w
    assert pullback_form(w, 2) == parse_form("-6*x^5 dx + 2*y dy")
    assert pullback_form(parse_form("y dx + x dy"), 3) == parse_form("3*x^2*y dx + x^3 dy")


def _lattice_scan(mu, k, l1, h1):
    s = F(k - l1 - 1, h1 - 1)
    out = set()
    for p in range(1, 4 * int(mu) + 4):
        for j in range(1, h1):
            i = k - 1 - p * j
            if i >= 0 and i + mu * j >= k - mu and i + s * j <= k - 1:
                out.add(p)
    return out


def test_finiteness_region():
    assert finiteness_region(2, 8, 0, 4) <= {2, 3}
    assert finiteness_region(1, 3, 0, 3) == {1}
    assert finiteness_region(3, 12, 0, 4) == _lattice_scan(F(3), 12, 0, 4) == {4, 5}


@settings(max_examples=30)
@given(st.integers(1, 6), st.integers(0, 6), st.integers(2, 6))
def test_finiteness_region_inside_window(mu, l1, h1):
    k = l1 + mu * h1
    region = finiteness_region(mu, k, l1, h1)
    assert region == _lattice_scan(F(mu), k, l1, h1)
    assert all(mu <= p < 2 * mu for p in region)


# ---------------------------------------------------------------------------
# Camacho-Sad indices and blow-ups
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("text,index", [("y dx + x dy", -1), ("y dx - x dy", 1), ("2*y dx + x dy", -2)])
def test_cs_examples(text, index):
    s = camacho_sad_index(parse_form(text))
    assert s.is_exact() and s.re == index and s.im == 0


def test_cs_rejects_non_separatrix():
    with pytest.raises(FormError):
        camacho_sad_index(parse_form("d(y-x^2)"))


def test_cs_of_logarithmic_forms_against_intersection_formula():
    """Index along C_i equals -sum_j lambda_j (C_i.C_j) / lambda_i."""
    rng = random.Random(5)
    done = 0
    while done < 20:
        r = rng.randint(2, 4)
        etas = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(r)]
        if len(set(etas)) < r:
            continue
        lam = [rng.choice([-3, -2, -1, 1, 2, 3, 5]) for _ in range(r)]
        texts = ["y-(" + "+".join(f"({a})*x^{k + 1}" for k, a in enumerate(e)) + ")" for e in etas]
        w = logarithmic_form(parse_polys(texts), lam)
        for i in range(r):
            inter = sum(lam[j] * min(k + 1 for k in range(3) if etas[i][k] != etas[j][k])
                        for j in range(r) if j != i)
            got = camacho_sad_index(w, {k + 1: a for k, a in enumerate(etas[i]) if a})
            assert got.re == F(-inter, lam[i]) and got.im == 0
        done += 1


def test_indices_on_first_divisor_sum_to_self_intersection():
    rng = random.Random(3)
    for _ in range(10):
        r = rng.randint(2, 4)
        slopes = rng.sample(range(-4, 5), r)
        lam = [rng.choice([1, 2, 3, 5, 7]) for _ in range(r)]
        w = logarithmic_form(parse_polys([f"y-({s})*x" for s in slopes]), lam)
        data = blowup_chain(w, 1)
        F0 = data.field
        total = sum((divisor_index_at(data, F0(s)) for s in slopes), F0.zero())
        assert total == F0(-1)


def test_blowup_chain_examples():
    L = logarithmic_form(polys("y", "y-x^2", "y+x^2"), [1, 1, 1])
    d = blowup_chain(L, 2)
    K = d.field
    assert d.A0 == upoly_trim([K(0), K(-6), K(0), K(6)])
    d = blowup_chain(parse_form("y dx + x dy"), 1)
    assert [int(str(c)) for c in d.A0] == [0, 2] and [int(str(c)) for c in d.B0] == [1]
    w = parse_form("d(y^2-x^3)")
    d0 = blowup_chain(w, 0)
    assert d0.A0 == [] and d0.s == 0


def test_nu0_equals_polar_multiplicity():
    for text in ["y^2-x^3", "y^5-x^11", "y*(y-x^2)*(y+x^2)", "(y^2-x^3)*(y^2+x^3)", "y^3-x^5"]:
        w = parse_form(f"d({text})")
        C = poly(text)
        assert nu0(w) == C.order() - 1
        res = generic_polar_equisingularity(w, C)
        assert res.gamma.multiplicity() == nu0(w)


# ---------------------------------------------------------------------------
# generic polars
# ---------------------------------------------------------------------------


def test_generic_polar_examples():
    f_parts = polys("y", "y-x^2", "2*y-(1+sqrt(-3))*x^2")
    res = generic_polar_equisingularity(OneForm.exact(product(f_parts)), product(f_parts), curve_parts=f_parts)
    assert res.gamma.r == 1 and res.gamma.branches[0].puiseux_pairs == [(5, 2)]
    assert len(res.directions) == 3
    g = product(polys("y", "y-x^2", "y+x^2"))
    res = generic_polar_equisingularity(OneForm.exact(g), g)
    assert res.gamma.r == 2 and all(b.genus == 0 for b in res.gamma.branches) and res.gamma.coinc(0, 1) == 2


def test_generic_polar_of_perturbed_log_form():
    w = parse_form("(4*i*x*y^2+2*x^6*y)dx+(y^2-2*i*x^2*y-x^4-x^7)dy")
    parts = polys("y", "y-x^2", "y+x^2", field=w.field)
    res = generic_polar_equisingularity(w, product(parts), curve_parts=parts)
    assert res.gamma.r == 1 and res.gamma.branches[0].puiseux_pairs == [(5, 2)]


def test_sampling_is_deterministic():
    w = parse_form("d(y^2-x^3)")
    a = generic_polar_equisingularity(w, poly("y^2-x^3"), SamplingPolicy(seed=4))
    b = generic_polar_equisingularity(w, poly("y^2-x^3"), SamplingPolicy(seed=4))
    assert a.directions == b.directions and a.transcript == b.transcript


def test_sampling_reports_shortage():
    w = parse_form("d(y^2-x^3)")
    with pytest.raises(SamplingError):
        generic_polar_equisingularity(w, poly("y^2-x^3"), SamplingPolicy(samples=5, max_attempts=2))


def test_is_resolved_by_examples():
    res = generic_polar_equisingularity(parse_form(OMEGA1), poly("y^5-x^11"))
    assert is_resolved_by(res.union)
    res = generic_polar_equisingularity(parse_form("d(y^2-x^3)"), poly("y^2-x^3"))
    assert is_resolved_by(res.union)


def test_ramified_polar_matches_pulled_union():
    w = parse_form("d(y^2-x^3)")
    res = generic_polar_equisingularity(w, poly("y^2-x^3"), ramify=2)
    assert res.union.part("C").etype.r == 2
    assert all(b.genus == 0 for b in res.union.etype.branches)


# ---------------------------------------------------------------------------
# polar traces on the divisors of the ramified resolution
# ---------------------------------------------------------------------------


def _trace(P, V):
    zero = Poly2.from_dict(P.field, {})
    return blowup_chain(OneForm(P, zero, check=False), V.p, V.prefix).A0


def _proportional(a, b):
    a, b = upoly_trim(a), upoly_trim(b)
    if len(a) != len(b):
        return False
    r = b[-1] / a[-1]
    return all(x * r == y for x, y in zip(a, b))


@pytest.mark.parametrize("form,curve,n", [
    ("d(y^2-x^3)", "y^2-x^3", 2),
    (OMEGA1, "y^5-x^11", 5),
    ("d((y^2-x^3)*(y+x))", "(y^2-x^3)*(y+x)", 2),
])
def test_pullback_polar_traces_agree_beyond_first_level(form, curve, n):
    w = parse_form(form)
    W = pullback_form(w, n)
    comps = ramified_components([poly(curve, field=w.field)], n)
    verts = chart_vertices([b for _, b in comps])
    d = Direction(F(3), F(7))
    pulled_polar = pull_curve(polar_curve(w, d).poly, n)
    polar_of_pull = polar_curve(W, d).poly
    checked = 0
    for V in verts:
        if V.p > n:
            assert _proportional(_trace(pulled_polar, V), _trace(polar_of_pull, V))
            checked += 1
    assert checked


def test_first_divisor_traces_move_with_direction():
    w = parse_form("d((y^2-x^3)*(y+x))")
    n = 2
    comps = ramified_components([poly("(y^2-x^3)*(y+x)")], n)
    (V,) = [V for V in chart_vertices([b for _, b in comps]) if V.p == n]
    K = V.points[0][0].field
    curve_pts = [[-c, K.one()] for c, _ in V.points]

    def free_part(d):
        t = [K(c) for c in _trace(pull_curve(polar_curve(w, d).poly, n), V)]
        for lin in curve_pts:
            while True:
                q, r = upoly_divmod(t, lin)
                if r:
                    break
                t = q
        return t

    a, b = free_part(Direction(F(1), F(2))), free_part(Direction(F(5), F(-3)))
    assert len(a) - 1 == V.b - 1 == len(b) - 1
    assert len(upoly_gcd(a, b)) == 1


# ---------------------------------------------------------------------------
# G* conditions
# ---------------------------------------------------------------------------


def test_gstar_examples():
    parts = polys("y", "y-x^2", "y+x^2")
    assert gstar_check(OneForm.exact(product(parts)), parts).verdict == "pass"
    w = parse_form("(4*i*x*y^2+2*x^6*y)dx+(y^2-2*i*x^2*y-x^4-x^7)dy")
    assert gstar_check(w, polys("y", "y-x^2", "y+x^2", field=w.field)).verdict == "pass"
    rep = gstar_check(parse_form("y^2 dx + x^3 dy"), polys("y^2-x^3"))
    assert rep.verdict == "fail" and rep.reasons


def test_gstar_for_cusp_is_pass():
    rep = gstar_check(parse_form("d(y^2-x^3)"), polys("y^2-x^3"))
    assert rep.verdict == "pass" and rep.n == 2
    assert all(idx != -1 for idx in rep.corner_indices.values())

import random

import pytest
import sympy

from polarkind.cli.formats import parse_lambda
from polarkind.dualgraph import build_dual_graph, is_kind
from polarkind.foliation import OneForm, blowup_chain, divisor_index_at, parse_form, pullback_form
from polarkind.logmodel import (
    LogModel,
    dead_arc_discriminant,
    dead_arc_discriminant_vanishes,
    dead_arc_h_polynomial,
    discriminant_test,
    discriminant_value,
    cs_indices_on_divisor,
    h_polynomial,
    logarithmic_form,
    membership_UC,
    uc_nonempty,
    zariski_general_check,
)
from polarkind.numfield import parse_polys
from polarkind.numfield.field import QQ, upoly_trim
from polarkind.puiseux import BivariateGerm, joint_equisingularity

from helpers import polys, product

F_PARTS = ["y", "y-x^2", "2*y-(1+sqrt(-3))*x^2"]
G_PARTS = ["y", "y-x^2", "y+x^2"]


def q(*cs):
    return [QQ(c) for c in cs]


def first_h(parts, lam):
    m = LogModel(polys(*parts), lam)
    (V,) = [V for V in m.bifurcations() if V.p > m.n]
    return h_polynomial(m, V)


# ---------------------------------------------------------------------------
# logarithmic forms
# ---------------------------------------------------------------------------


def test_log_form_with_unit_residues_is_hamiltonian():
    assert logarithmic_form(polys("y", "y-x"), [1, 1]) == parse_form("d(y*(y-x))")
    assert logarithmic_form(polys(*G_PARTS), [1, 1, 1]) == parse_form("d(y*(y-x^2)*(y+x^2))")


def test_log_form_is_perturbed_form_without_its_extra_terms():
    w = parse_form("(4*i*x*y^2+2*x^6*y)dx+(y^2-2*i*x^2*y-x^4-x^7)dy")
    lam = [P.coeff(0, 0) for P in polys("1", "-i", "i", field=w.field)]
    L = logarithmic_form(polys(*G_PARTS, field=w.field), lam)
    rest = OneForm(w.A - L.A, w.B - L.B, check=False)
    assert sorted(rest.A.terms) == [(6, 1)] and sorted(rest.B.terms) == [(7, 0)]


def test_log_form_rejects_zero_residues():
    with pytest.raises(ValueError):
        logarithmic_form(polys("y", "y-x"), [0, 0])


def test_log_form_truncation():
    L = logarithmic_form(polys(*G_PARTS), [1, 2, 3], trunc=4)
    assert L.truncated and L.truncation_degree == 4


# ---------------------------------------------------------------------------
# H polynomials
# ---------------------------------------------------------------------------


def test_h_for_sixth_root_configuration():
    h = first_h(F_PARTS, [1, 1, 1])
    K = h.Lambda.field
    c = parse_polys(["(1+sqrt(-3))/2"], field=K)[0].coeff(0, 0)
    assert h.H == upoly_trim([c, -2 * (1 + c), K(3)])
    assert c * c - c + 1 == K.zero()
    assert discriminant_test(h) == "repeated"
    assert discriminant_value(h).is_zero()


def test_h_for_three_parabolas():
    h = first_h(G_PARTS, [1, 1, 1])
    assert h.H == q(-1, 0, 3)
    assert discriminant_test(h) == "distinct"
    assert discriminant_value(h) == QQ(12)


def test_h_first_unit_residue_is_nondegenerate():
    h = first_h(G_PARTS, [1, 0, 0])
    assert discriminant_test(h) == "distinct" and not discriminant_value(h).is_zero()


def test_discriminant_test_on_bare_polynomials():
    assert discriminant_test(q(-1, 0, 3)) == "distinct"
    # v (l1 (v^2 - 4) + l2 (v^2 - 1)) with (l1, l2) = (1, -4) is -3 v^3
    assert discriminant_test(q(0, 0, 0, -3)) == "repeated"
    assert discriminant_test(q(-1, 1)) == "distinct"


def test_h_is_linear_in_lambda():
    rng = random.Random(2)
    for parts in (G_PARTS, ["y", "y-x", "y-2*x", "y-x^2"], ["y^2-x^3", "y-x^2"]):
        for _ in range(3):
            a = [rng.randint(-5, 5) or 1 for _ in parts]
            b = [rng.randint(-5, 5) or 1 for _ in parts]
            ab = [x + y for x, y in zip(a, b)]
            ms = [LogModel(polys(*parts), lam) for lam in (a, b, ab)]
            for k, V in enumerate(ms[0].bifurcations()):
                Ha, Hb, Hab = (m.h_data(m.bifurcations()[k]).H for m in ms)
                n = max(len(Ha), len(Hb), len(Hab))
                pad = lambda H: list(H) + [H[0].field.zero() if H else QQ(0)] * (n - len(H))
                K = ms[0].field
                assert all(K(x) + K(y) == K(z) for x, y, z in zip(pad(Ha), pad(Hb), pad(Hab)))


# ---------------------------------------------------------------------------
# closed form against explicit blow-up
# ---------------------------------------------------------------------------

POOL = ["y-({a})*x", "y-({a})*x^2", "y-({a})*x^3", "y^2-({a})*x^3", "y^2-({a})*x^5", "y^2-({a})*x^7", "y-({a})*x-x^2"]


def _random_kind_curve(rng):
    while True:
        k = rng.randint(1, 3)
        parts = [rng.choice(POOL).format(a=rng.choice([1, 2, 3, -1, -2, 5])) for _ in range(k)]
        if len(set(parts)) < k:
            continue
        ps = parse_polys(parts)
        lt = joint_equisingularity([("C", BivariateGerm.from_poly(P)) for P in ps])
        g = build_dual_graph(lt)
        if g.bifurcations() and is_kind(g):
            return parts


def _proportional(a, b):
    a, b = upoly_trim(list(a)), upoly_trim(list(b))
    if len(a) != len(b) or not a:
        return None
    r = b[-1] / a[-1]
    return r if all(x * r == y for x, y in zip(a, b)) else None


def test_h_data_matches_blowup_chain_on_random_kind_curves():
    rng = random.Random(17)
    curves = 0
    while curves < 20:
        parts = _random_kind_curve(rng)
        lam = [rng.choice([1, 2, 3, -1, -2, 7]) for _ in parts]
        m = LogModel(parse_polys(parts), lam)
        W = pullback_form(m.form(), m.n)
        if W.field is not m.field and m.field.is_extension_of(W.field):
            W = W.lift(m.field)
        checked = 0
        for V in m.vertices:
            h = m.h_data(V)
            if h.Lambda.is_zero():
                continue
            data = blowup_chain(W, V.p, V.prefix)
            rA = _proportional(h.A, data.A0)
            rB = _proportional(h.B, data.B0)
            assert rA is not None and rA == rB, (parts, lam, V.p)
            for c, idx in zip(h.points, cs_indices_on_divisor(h)):
                assert idx == divisor_index_at(data, c)
            checked += 1
        if checked:  # otherwise every divisor is dicritical for this lambda
            curves += 1


# ---------------------------------------------------------------------------
# the dead-arc case
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("b_E", [2, 3])
@pytest.mark.parametrize("n_E", [2, 3, 4])
def test_dead_arc_law_symbolic(n_E, b_E):
    assert dead_arc_discriminant_vanishes(n_E, b_E) == (n_E != 2)


@pytest.mark.parametrize("n_E", [2, 3, 4])
def test_dead_arc_law_four_branches(n_E):
    assert dead_arc_discriminant_vanishes(n_E, 4, phis=(1, 2, 3)) == (n_E != 2)


def test_dead_arc_polynomial_shape():
    H, v, W, phi = dead_arc_h_polynomial(2, 3)
    assert H.degree() == 2 * 2 - 1
    expected = sympy.expand(v * (W[0] * (v**2 - phi[1]) + W[1] * (v**2 - phi[0])))
    assert sympy.expand(H.as_expr() - expected) == 0
    assert dead_arc_discriminant(2, 2) == 1


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def test_membership_examples():
    assert membership_UC(polys(*G_PARTS), [1, 1, 1]).verdict == "in"
    r = membership_UC(polys(*F_PARTS), [1, 1, 1])
    assert r.verdict == "out" and r.failing is not None and r.failing.p == 2
    assert membership_UC(polys(*G_PARTS), parse_lambda("1,-i,i")).verdict == "out"
    r = membership_UC(polys("y^3-x^5"), [1])
    assert r.verdict == "empty" and r.witness is not None
    assert membership_UC(polys("y^2-x^3"), [1]).verdict == "in"


def test_membership_zero_residue_is_undetermined():
    assert membership_UC(polys(*G_PARTS), [1, 0, 1]).verdict in ("undetermined-resonance", "out")


def _all_divisors_distinct(parts, lam):
    m = LogModel(parse_polys(parts), lam)
    return all(discriminant_test(m.h_data(V)) == "distinct" for V in m.bifurcations() if V.p > m.n)


TYPES = [
    ["y^2-x^3"], ["y^3-x^5"], ["y^5-x^11"], ["y^2-x^5"], ["y^3-x^4"], ["y^3-x^7"], ["y^2-x^7"],
    ["y", "y-x"], ["y", "y-x", "y+x"], ["y", "y-x^2", "y+x^2"], ["y", "y-x^3"], ["y", "y-x", "y-x^2"],
    ["y^2-x^3", "y"], ["y^2-x^3", "y-x"], ["y^2-x^3", "y^2+x^3"], ["y^2-x^5", "y^2-4*x^5"],
    ["y^2-x^3", "y^3-x^5"], ["y^3-x^5", "y"], ["y^3-x^4", "y-x"], ["y^2-x^5", "y-x^2"],
    ["y^2-x^3", "y^2-x^5"], ["y^3-x^5", "y^3+x^5"], ["y^2-x^3", "y-x^2", "y+x^2"], ["y^2-x^5", "y"],
    ["y^3-x^4", "y"], ["y^2-x^7", "y-x^3"], ["y^3-x^7", "y"], ["y", "y-x", "y+x", "y-2*x"],
    ["y-x^2", "y+x^2", "y-2*x^2"], ["y^2-x^3", "y+x"],
]


@pytest.mark.parametrize("parts", TYPES, ids=["*".join(p) for p in TYPES])
def test_nonempty_iff_kind(parts):
    """Kind types admit residues with distinct H roots everywhere; the others never do."""
    lt = joint_equisingularity([("C", BivariateGerm.from_poly(P)) for P in parse_polys(parts)])
    kind = bool(is_kind(build_dual_graph(lt)))
    assert uc_nonempty(lt.etype) == kind
    rng = random.Random(len(parts) * 31 + len(parts[0]))
    trials = [[rng.choice([1, 2, 3, 5, 7, 11, -1, -3]) for _ in parts] for _ in range(5)]
    found = any(_all_divisors_distinct(parts, lam) for lam in trials)
    assert found == kind


# ---------------------------------------------------------------------------
# properties (A) and (B)
# ---------------------------------------------------------------------------


def test_zariski_examples():
    rep = zariski_general_check(parse_form("d(y*(y-x^2)*(y+x^2))"), polys(*G_PARTS))
    assert rep.property_A and rep.property_B
    f = polys(*F_PARTS)
    rep = zariski_general_check(OneForm.exact(product(f)), f)
    assert not rep.property_B and rep.implication_holds


def test_zariski_two_tangent_lines_equivalence():
    for form, parts in [("d(y^2-x^3)", ["y^2-x^3"]), ("d(y*(y-x))", ["y", "y-x"]),
                        ("d((y^2-x^3)*(y^2+x^3))", ["y^2-x^3", "y^2+x^3"])]:
        rep = zariski_general_check(parse_form(form), polys(*parts))
        assert rep.property_A == rep.property_B


def test_zariski_non_kind_reports_witness():
    rep = zariski_general_check(parse_form("d(y^3-x^5)"), polys("y^3-x^5"))
    assert not rep.property_A and not rep.property_B and rep.witness is not None

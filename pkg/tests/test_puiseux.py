import random
from fractions import Fraction as F
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polarkind.numfield import parse_scalar
from polarkind.puiseux import (
    BivariateGerm,
    BranchType,
    EquisType,
    InconsistentTypeError,
    branch_type,
    coincidence,
    equisingularity_type,
    germ_equisingularity,
    infinitely_near_multiplicities,
    intersection_multiplicity,
    newton_polygon,
    puiseux_expand,
    semigroup_generators,
)

from helpers import poly, polys, product


def expand(text):
    return puiseux_expand(BivariateGerm.from_poly(poly(text)))


def test_polygon_binomials():
    P = newton_polygon(poly("y^5-x^11"))
    assert P.vertices == ((0, 5), (11, 0))
    assert P.sides == ((F(11, 5), F(11)),)
    assert newton_polygon(poly("y^2-x^3")).sides[0][0] == F(3, 2)


def test_polygon_middle_point_on_side():
    P = newton_polygon(poly("y^4-5*x^5*y^2+4*x^10"))
    assert P.vertices == ((0, 4), (10, 0))
    assert P.sides == ((F(5, 2), F(10)),)


def test_expand_cusp_single_ramified_branch():
    (b,) = expand("y^2-x^3")
    assert b.n == 2 and min(b.terms) == 3


def test_expand_factored_three_lines():
    bs = expand("y*(y-x^2)*(y+x^2)")
    assert all(b.n == 1 for b in bs)
    assert len(bs) == 3 and sum(1 for b in bs if not b.terms) == 1
    lead = sorted((min(b.terms), b.coeffs[min(b.terms)].to_complex().real) for b in bs if b.terms)
    assert lead == [(2, -1.0), (2, 1.0)]


def test_expand_leading_coefficients_with_sixth_root():
    bs = puiseux_expand(BivariateGerm.from_poly(product(polys("y", "y-x^2", "2*y-(1+sqrt(-3))*x^2"))))
    assert len(bs) == 3 and all(b.n == 1 for b in bs)
    leads = [(b.coeffs[2].to_complex() if 2 in b.terms else 0j) for b in bs]
    leads = sorted(leads, key=lambda z: (z.real, z.imag))
    ref = sorted([0j, 1 + 0j, complex(parse_scalar("(1+sqrt(-3))/2").to_complex())], key=lambda z: (z.real, z.imag))
    assert all(abs(a - b) < 1e-12 for a, b in zip(leads, ref))


def test_coincidences_of_examples():
    a, b = expand("(y-x^2)*(y+x^2)")
    assert coincidence(a, b) == 2
    (c,) = expand("y^2-x^3")
    (d,) = expand("y^2-x^5")
    (e,) = expand("y^2-4*x^5")
    assert coincidence(d, e) == F(5, 2)
    # the two conjugates x^(3/2) and -x^(3/2) of the cusp meet at order 3/2
    assert branch_type(c).char_exponents[1] == 3


def test_branch_types_and_pairs():
    (c,) = expand("y^2-x^3")
    assert branch_type(c).char_exponents == (2, 3) and branch_type(c).puiseux_pairs == [(3, 2)]
    (d,) = expand("y^5-x^11")
    assert branch_type(d).puiseux_pairs == [(11, 5)]
    assert BranchType((4, 6, 7)).puiseux_pairs == [(3, 2), (7, 2)]


def test_equisingularity_of_examples():
    e = germ_equisingularity(BivariateGerm.from_poly(poly("y*(y-x^2)*(y+x^2)")))
    assert e.r == 3 and all(e.coinc(i, j) == 2 for i, j in combinations(range(3), 2))
    e = equisingularity_type(expand("(y^2-x^5)*(y^2-4*x^5)"))
    assert [b.char_exponents for b in e.branches] == [(2, 5), (2, 5)] and e.coinc(0, 1) == F(5, 2)
    # x = u^2 pulls the cusp back to v = u^3 and v = -u^3
    e = equisingularity_type(expand("y^2-x^6"))
    assert e.r == 2 and e.coinc(0, 1) == 3


def _semigroup_brute_force(n, terms, N):
    """Minimal generators of {ord_t g(t^n, y(t))} below ``N``.

    Row-reduces the t-expansions of all monomials x^a y^b; the pivot orders of
    the echelon form are exactly the orders reached by linear combinations.
    """
    t = sympy.symbols("t")
    y = sum(c * t**s for s, c in terms.items())
    rows = []
    for a in range(N // n + 1):
        for b in range(N // min(terms) + 1):
            p = sympy.Poly(sympy.expand(t ** (n * a) * y**b), t)
            rows.append([p.coeff_monomial(t**k) for k in range(N)])
    M = sympy.Matrix(rows)
    vals = set()
    for k in range(N):
        piv = next((i for i in range(M.rows) if M[i, k] != 0 and all(M[i, j] == 0 for j in range(k))), None)
        if piv is None:
            continue
        vals.add(k)
        for i in range(M.rows):
            if i != piv and M[i, k] != 0 and all(M[i, j] == 0 for j in range(k)):
                M[i, :] = M[i, :] - (M[i, k] / M[piv, k]) * M[piv, :]
        M[piv, :] = sympy.zeros(1, N)
    gens, reach = [], {0}
    for v in sorted(vals):
        if v and v not in reach:
            gens.append(v)
            reach = {r + k * v for r in reach for k in range(N) if r + k * v < N}
    return gens


def test_semigroup_generators():
    assert semigroup_generators(BranchType((2, 3))) == [2, 3]
    assert semigroup_generators(BranchType((5, 11))) == [5, 11]
    assert semigroup_generators(BranchType((4, 6, 7))) == [4, 6, 13]
    assert _semigroup_brute_force(4, {6: 1, 7: 1}, 24) == [4, 6, 13]
    assert _semigroup_brute_force(2, {3: 1}, 10) == [2, 3]


def test_intersection_multiplicity_examples():
    cusp = BranchType((2, 3))
    assert intersection_multiplicity(cusp, 1, 1) == 2
    assert intersection_multiplicity(cusp, 2, F(3, 2)) == 6
    assert intersection_multiplicity(cusp, 1, F(3, 2)) == 3


def test_intersection_multiplicity_rejects_inadmissible():
    with pytest.raises((InconsistentTypeError, ValueError)):
        intersection_multiplicity(BranchType((2, 3)), 1, F(5, 4))


# ---------------------------------------------------------------------------
# order-of-evaluation oracle on random pairs
# ---------------------------------------------------------------------------

X, Y, T = sympy.symbols("x y t")


def _implicit(n, terms):
    """Equation of the branch x = t^n, y = sum c t^s by elimination."""
    y = sum(c * T**s for s, c in terms.items())
    return sympy.expand(sympy.resultant(T**n - X, Y - y, T))


def _order_on(f, m, terms):
    y = sum(c * T**s for s, c in terms.items())
    expr = sympy.expand(f.subs({X: T**m, Y: y}))
    return min(mon[0] for mon in sympy.Poly(expr, T).monoms())


def _random_branch(rng):
    n = rng.choice([1, 1, 2, 2, 3])
    while True:
        exps = sorted(rng.sample(range(n, 4 * n + 3), rng.randint(1, 3)))
        g = n
        for s in exps:
            g = sympy.gcd(g, s)
        if g == 1:
            return n, {s: rng.choice([-3, -2, -1, 1, 2, 3]) for s in exps}


def _random_pair(rng):
    n, a = _random_branch(rng)
    if rng.random() < 0.5:
        keep = sorted(a)[: rng.randint(1, len(a))]
        b = {s: a[s] for s in keep}
        s_new = rng.randint(max(keep) + 1, max(keep) + 4)
        b[s_new] = rng.choice([-2, -1, 1, 2]) + (a.get(s_new, 0))
        b = {s: c for s, c in b.items() if c}
        return (n, a), (n, b)
    return (n, a), _random_branch(rng)


def _to_text(expr):
    return str(expr).replace("**", "^")


def test_intersection_formula_against_evaluation_oracle():
    rng = random.Random(7)
    checked = 0
    while checked < 50:
        (n, a), (m, b) = _random_pair(rng)
        fa, fb = _implicit(n, a), _implicit(m, b)
        if sympy.gcd(fa, fb) != 1 or (n, a) == (m, b):
            continue
        oracle = _order_on(fa, m, b)
        pa, pb = polys(_to_text(fa), _to_text(fb))
        (ga,) = puiseux_expand(BivariateGerm.from_poly(pa))
        (gb,) = puiseux_expand(BivariateGerm.from_poly(pb))
        assert ga.n == n and gb.n == m
        c = coincidence(ga, gb)
        assert intersection_multiplicity(branch_type(ga), m, c) == oracle, (n, a, m, b)
        # Noether: sum of products of multiplicities over shared points
        e = equisingularity_type([ga, gb])
        res = infinitely_near_multiplicities(e)
        noether = sum(p.branch_mult.get(0, 0) * p.branch_mult.get(1, 0) for p in res.points)
        assert noether == oracle
        checked += 1


def test_multiplicity_sequences():
    res = infinitely_near_multiplicities(EquisType([BranchType((2, 3))]))
    assert [p.multiplicity for p in res.points] == [2, 1, 1]
    two = EquisType([BranchType((1,)), BranchType((1,))], [[None, F(3)], [F(3), None]])
    assert [p.multiplicity for p in infinitely_near_multiplicities(two).points][:3] == [2, 2, 2]
    res = infinitely_near_multiplicities(EquisType([BranchType((1,))]))
    assert all(p.multiplicity == 1 for p in res.points)


def test_ultrametric_violation_rejected():
    s = BranchType((1,))
    with pytest.raises(InconsistentTypeError):
        EquisType([s, s, s], [[None, F(2), F(3)], [F(2), None, F(4)], [F(3), F(4), None]]).validate()


def test_polygon_sides_have_branches_with_that_slope():
    for text in ["y^5-x^11", "(y^2-x^3)*(y-x^5)", "y*(y^3-x^7)*(y-x)"]:
        g = BivariateGerm.from_poly(poly(text))
        slopes = {b.leading_exponent() for b in puiseux_expand(g) if b.terms}
        for mu, _ in newton_polygon(g).sides:
            assert mu in slopes


# ---------------------------------------------------------------------------
# invariance under coordinate changes
# ---------------------------------------------------------------------------

_factors = st.sampled_from(["y-x^2", "y+x^2", "y^2-x^3", "y^2-2*x^3", "y-x^3", "y^2-x^5", "y^3-x^4", "y+2*x"])


@settings(max_examples=15)
@given(st.lists(_factors, min_size=1, max_size=3, unique=True), st.integers(-3, 3), st.integers(1, 4))
def test_type_invariant_under_shear_and_scaling(factors, eps, c):
    text = "*".join(f"({f})" for f in factors)
    base = germ_equisingularity(BivariateGerm.from_poly(poly(text)))
    sheared = sympy.expand(sympy.sympify(text.replace("^", "**")).subs(Y, Y + eps * X, simultaneous=True))
    scaled = sympy.expand(sympy.sympify(text.replace("^", "**")).subs(X, c * X, simultaneous=True))
    for expr in (sheared, scaled):
        e = germ_equisingularity(BivariateGerm.from_poly(poly(_to_text(expr))))
        assert e == base

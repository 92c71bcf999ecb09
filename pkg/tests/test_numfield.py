from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from polarkind.numfield import (
    DomainError,
    LineageError,
    ParseError,
    Scalar,
    UndecidedError,
    certify_sign,
    decide_sign,
    escalate,
    parse_polys,
    parse_scalar,
)
from polarkind.numfield.field import QQ, embed_elements, upoly_gcd


def test_parse_exact_one():
    s = parse_scalar("1")
    assert s.is_exact() and s.re == 1 and s.im == 0


def test_parse_minus_i_is_exact_gaussian():
    s = parse_scalar("-i")
    assert s.kind == "exact" and (s.re, s.im) == (0, -1)


def test_sixth_root_of_unity_enclosure_matches_mpmath():
    s = parse_scalar("(1+sqrt(-3))/2")
    assert s.radius() < 2.0**-60
    mpmath.mp.prec = 200
    ref = (1 + mpmath.sqrt(-3)) / 2
    z = s.to_acb(128)
    re = mpmath.mpf(z.real.mid().str(60, radius=False))
    im = mpmath.mpf(z.imag.mid().str(60, radius=False))
    assert abs(re - ref.real) < mpmath.mpf(2) ** -100
    assert abs(im - ref.imag) < mpmath.mpf(2) ** -100


def test_c_squared_minus_c_plus_one_is_certified_zero_in_tower():
    c = parse_scalar("(1+sqrt(-3))/2", exact_tower=True)
    assert certify_sign(c * c - c + 1) == "zero"


def test_interval_away_from_zero_is_nonzero():
    import flint

    b = flint.acb(flint.arb(1, 0.1))
    assert certify_sign(Scalar.from_ball(b)) == "nonzero"


def test_exact_zero():
    assert certify_sign(parse_scalar("0")) == "zero"
    assert certify_sign(parse_scalar("3/4-3/4")) == "zero"


def test_escalate_sqrt2_shrinks_radius():
    s = parse_scalar("sqrt(2)", precision=64)
    t = escalate(s, 256)
    assert t.radius() < 2.0**-250
    assert t.radius() <= s.radius()


def test_escalate_exact_is_identity():
    s = parse_scalar("3/4")
    assert escalate(s, 512) is s


def test_interval_cannot_prove_zero():
    s = parse_scalar("sqrt(2)-sqrt(2)")
    # an exact tower evaluation sees the cancellation
    assert s.is_exact() or certify_sign(s) in ("zero", "undecided")
    ball = Scalar.from_ball(parse_scalar("sqrt(2)").to_acb(128) - parse_scalar("sqrt(2)").to_acb(128))
    assert certify_sign(ball) == "undecided"
    with pytest.raises(UndecidedError):
        decide_sign(ball)


def test_escalate_without_lineage_fails():
    import flint

    s = Scalar.from_ball(flint.acb(flint.arb(1, 1e-20)))
    with pytest.raises(LineageError):
        escalate(s, 256)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_scalar("1+")
    with pytest.raises(DomainError):
        parse_scalar("sqrt(x)")
    with pytest.raises(DomainError):
        parse_scalar("sqrt(1+1)")


def test_precision_floor():
    with pytest.raises(ValueError):
        parse_scalar("1", precision=32)


gauss = st.tuples(st.fractions(max_denominator=50), st.fractions(max_denominator=50))


@given(gauss, gauss)
def test_exactness_closure(a, b):
    x, y = Scalar.exact(*a), Scalar.exact(*b)
    for r in (x + y, x - y, x * y):
        assert r.is_exact()
    if b != (0, 0):
        assert (x / y).is_exact()
        q = x / y
        za = complex(float(a[0]), float(a[1]))
        zb = complex(float(b[0]), float(b[1]))
        assert abs(q.to_complex() - za / zb) < 1e-9 * (1 + abs(za / zb))


@st.composite
def expressions(draw, depth=0):
    if depth >= 4 or draw(st.booleans()):
        leaf = draw(st.sampled_from(["1", "2", "3/7", "i", "sqrt(2)", "sqrt(-3)", "sqrt(5)"]))
        return leaf
    op = draw(st.sampled_from(["+", "-", "*"]))
    return f"({draw(expressions(depth + 1))}{op}{draw(expressions(depth + 1))})"


@given(expressions())
def test_containment_against_quadruple_precision(text):
    s = parse_scalar(text, precision=64)
    ref = parse_scalar(text, precision=256, exact_tower=True)
    z = ref.to_acb(256)
    zs = s.to_acb(64)
    if s.is_exact():
        assert abs(s.to_complex() - ref.to_complex()) < 1e-12
    else:
        assert zs.overlaps(z)


@given(expressions())
def test_monotone_escalation(text):
    s = parse_scalar(text, precision=64)
    if not s.is_exact():
        assert escalate(s, 128).radius() <= s.radius()


def test_embed_elements_identifies_equal_algebraics():
    (a,) = [p.coeff(0, 0) for p in parse_polys(["(1+sqrt(-3))/2"])]
    (b,) = [p.coeff(0, 0) for p in parse_polys(["i"])]
    L, (ea, eb) = embed_elements(QQ, [a, b])
    assert ea * ea - ea + 1 == L.zero()
    assert eb * eb == L(-1)


def test_upoly_gcd_detects_common_root():
    F = QQ
    p = [F(-1), F(0), F(1)]  # t^2 - 1
    q = [F(-1), F(1)]  # t - 1
    g = upoly_gcd(p, q)
    assert len(g) == 2
    assert g[0] / g[1] == F(-1)
    assert Fraction(1) == F(1).rational()

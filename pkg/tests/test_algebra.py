"""Exact bivariate polynomial arithmetic.

Frozen oracle values used below were derived independently of the library:

* ``a_2 = u^2 + 5ut + 7u + 5t^2 + 15t + 11`` by expanding the recurrence
  (u+2t+3) * (u+3t+4) - (t+1)^2 by hand, and cross-checked as the weighted
  matching sum of the 5-cycle: (u+1)^2 + 5(t+1)(u+1) + 5(t+1)^2.
* ``b_2 = u^2 + 4ut + 6u + 3t^2 + 10t + 8`` as (u+2t+3)^2 - (t+1)^2, and as
  the matching sum of the 5-vertex path: (u+1)^2 + 4(t+1)(u+1) + 3(t+1)^2.
* ``u(u+2t+5)`` at (1/2, 1/3) is 1/4 + 1/3 + 5/2 = 37/12.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dasep import BivarPoly, ONE, T, U, ZERO, content_gcd, parse_poly
from dasep.errors import NotDivisible, ParseError


def poly(text):
    return parse_poly(text)


# ---------------------------------------------------------------------------
# construction and canonical form


def test_zero_terms_are_dropped():
    p = BivarPoly({(1, 0): 1, (0, 1): 0})
    assert p == U
    assert (0, 1) not in p.terms


def test_integral_fractions_collapse_to_int():
    p = BivarPoly({(1, 0): Fraction(4, 2)})
    assert p.terms[(1, 0)] == 2
    assert isinstance(p.terms[(1, 0)], int)


def test_constants():
    assert ZERO == BivarPoly.constant(0)
    assert ONE == BivarPoly.constant(1)
    assert U * ONE == U
    assert T + ZERO == T


def test_equality_against_plain_numbers():
    assert BivarPoly.constant(3) == 3
    assert BivarPoly.constant(Fraction(1, 2)) == Fraction(1, 2)
    assert U != 1


def test_hashable_and_usable_as_dict_key():
    d = {U + T: "x"}
    assert d[T + U] == "x"


# ---------------------------------------------------------------------------
# frozen arithmetic oracles


def test_recurrence_step_reproduces_a2():
    r1 = poly("u + 2*t + 3")
    r2 = poly("t^2 + 2*t + 1")
    a1 = poly("u + 3*t + 4")
    a2 = r1 * a1 - r2
    assert a2 == poly("u^2 + 5*u*t + 7*u + 5*t^2 + 15*t + 11")


def test_matching_sum_reproduces_b2():
    up1 = U + ONE
    tp1 = T + ONE
    b2 = up1 * up1 + BivarPoly.constant(4) * tp1 * up1 + BivarPoly.constant(3) * tp1 * tp1
    assert b2 == poly("u^2 + 4*u*t + 6*u + 3*t^2 + 10*t + 8")


def test_eval_at_rational_point():
    p = poly("u^2 + 2*u*t + 5*u")
    assert p.eval(Fraction(1, 2), Fraction(1, 3)) == Fraction(37, 12)
    assert p.eval(1, 1) == 8


def test_pow():
    assert (U + T) ** 2 == poly("u^2 + 2*u*t + t^2")
    assert (U + ONE) ** 0 == ONE


# ---------------------------------------------------------------------------
# rendering and parsing


def test_render_descending_lex_order():
    p = poly("u + 3*t + 4")
    assert str(p) == "u + 3*t + 4"
    q = poly("u^2 + 4*u*t + 3*u")
    assert str(q) == "u^2 + 4*u*t + 3*u"


def test_render_negative_and_fractional():
    assert str(U - T) == "u - t"
    assert str(BivarPoly({(1, 0): Fraction(1, 2)})) == "1/2*u"
    assert str(ZERO) == "0"


def test_parse_whitespace_and_implicit_coefficients():
    assert poly("u^2+4*u*t+3*u") == poly("u^2 + 4*u*t + 3*u")
    assert poly("-u + t") == T - U
    assert poly("7") == BivarPoly.constant(7)
    assert poly("3/2*t") == BivarPoly({(0, 1): Fraction(3, 2)})


def test_parse_rejects_garbage():
    for bad in ["u +", "2**t", "u^", "x + 1", "", "u^-1"]:
        with pytest.raises(ParseError):
            parse_poly(bad)


def test_parse_render_round_trip_random():
    rng = random.Random(20260816)
    for _ in range(300):
        terms = {}
        for _ in range(rng.randint(1, 8)):
            terms[(rng.randint(0, 5), rng.randint(0, 5))] = rng.randint(-9, 9)
        p = BivarPoly(terms)
        assert parse_poly(str(p)) == p


# ---------------------------------------------------------------------------
# ring axioms on seeded random triples


def _random_poly(rng, deg=4):
    terms = {}
    for _ in range(rng.randint(0, 6)):
        terms[(rng.randint(0, deg), rng.randint(0, deg))] = rng.randint(-9, 9)
    return BivarPoly(terms)


def test_ring_axioms_random_triples():
    rng = random.Random(99)
    for _ in range(1000):
        a, b, c = (_random_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + ZERO == a
        assert a * ONE == a
        assert a - a == ZERO


# ---------------------------------------------------------------------------
# exact division


def test_exact_div_round_trip():
    a = poly("u^2 + 4*u*t + 3*u")
    b = poly("u")
    assert a.exact_div(b) == poly("u + 4*t + 3")


def test_exact_div_rejects_non_divisor():
    with pytest.raises(NotDivisible):
        poly("u^2 + 1").exact_div(poly("u + t"))
    with pytest.raises(NotDivisible):
        poly("u*t + 1").exact_div(U)


def test_exact_div_fractional_quotient():
    # division is over the rationals: (u) / (2) = u/2
    half_u = BivarPoly({(1, 0): Fraction(1, 2)})
    assert U.exact_div(BivarPoly.constant(2)) == half_u


def test_div_by_zero():
    with pytest.raises(ZeroDivisionError):
        U.exact_div(ZERO)


# ---------------------------------------------------------------------------
# content gcd


def test_gcd_conventions():
    assert content_gcd([poly("2*u"), poly("4*u^2")]) == poly("2*u")
    assert content_gcd([poly("u + 1"), ONE]) == ONE
    assert content_gcd([ZERO, poly("-3*t")]) == poly("3*t")


def test_gcd_rational_contents_fold_separately():
    a = BivarPoly({(1, 0): Fraction(1, 2)})
    b = BivarPoly({(1, 0): Fraction(1, 3)})
    assert content_gcd([a, b]) == BivarPoly({(1, 0): Fraction(1, 6)})


def test_gcd_of_products_with_common_factor():
    g = poly("u + t + 1")
    a = g * poly("u + 2")
    b = g * poly("t + 3")
    assert content_gcd([a, b]) == g


def test_gcd_many_entries():
    g = poly("u + 1")
    fam = [g * poly("t"), g * poly("u"), g * poly("u + t + 2")]
    assert content_gcd(fam) == g


def test_gcd_all_zero_is_an_error():
    with pytest.raises(ValueError):
        content_gcd([ZERO, ZERO])


def test_gcd_sign_normalization():
    got = content_gcd([poly("-u - t"), poly("-2*u - 2*t")])
    assert got == poly("u + t")


# ---------------------------------------------------------------------------
# hypothesis properties

coeffs = st.integers(min_value=-9, max_value=9)
exps = st.tuples(st.integers(0, 4), st.integers(0, 4))
poly_st = st.dictionaries(exps, coeffs, max_size=6).map(BivarPoly)
points = st.fractions(min_value=-3, max_value=3, max_denominator=7)


@given(poly_st, poly_st, points, points)
@settings(max_examples=200, deadline=None)
def test_eval_is_a_ring_homomorphism(a, b, u0, t0):
    assert (a + b).eval(u0, t0) == a.eval(u0, t0) + b.eval(u0, t0)
    assert (a * b).eval(u0, t0) == a.eval(u0, t0) * b.eval(u0, t0)


@given(poly_st, poly_st)
@settings(max_examples=200, deadline=None)
def test_exact_div_inverts_multiplication(a, b):
    if not b.terms:
        return
    assert (a * b).exact_div(b) == a


@given(poly_st, poly_st)
@settings(max_examples=150, deadline=None)
def test_gcd_divides_both_and_quotients_are_coprime(a, b):
    if not a.terms or not b.terms:
        return
    g = content_gcd([a, b])
    qa = a.exact_div(g)
    qb = b.exact_div(g)
    assert qa * g == a
    assert qb * g == b
    assert content_gcd([qa, qb]) == ONE

"""Polynomials, rational functions, partial fractions, Laurent coefficients."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wittram.errors import IrreducibleDenominator, NotAPthPower
from wittram.fq import field
from wittram.laurent import KElem
from wittram.poly import Poly, Ring, kelem_divexact, kelem_gcd
from wittram.ratfunc import INFINITY, RatFunc, partial_fractions, recombine

from conftest import parse_k, parse_res


def rand_ratfunc(rng, f, max_poles=3, max_order=10):
    ring = Ring(f, False)
    x = Poly.x(ring)
    total = RatFunc.zero(ring)
    pts = rng.sample(range(min(f.q, 6)), k=rng.randint(1, min(3, max_poles)))
    for pt in pts:
        order = rng.randint(1, max_order)
        c = f.from_int(rng.randint(1, f.p - 1))
        lin = Poly(ring, {1: ring.one(), 0: -ring.lift(f.from_int(pt))})
        total = total + RatFunc(Poly.const(ring, c), lin ** order)
    for d in range(rng.randint(0, 2)):
        total = total + RatFunc.from_poly(Poly(ring, {d: f.from_int(rng.randint(0, f.p - 1))}))
    return total


def test_partial_fractions_fixture_f2(F2):
    f = parse_res(F2, "1/(x^2*(x-1))")
    poly, poles = partial_fractions(f)
    assert poly.is_zero()
    by_point = {str(k): v for k, v in poles.items()}
    assert [str(c) for c in by_point["0"]] == ["1", "1"]
    assert [str(c) for c in by_point["1"]] == ["1"]
    assert recombine(f.ring, poly, poles) == f


def test_partial_fractions_polynomial_only(F5):
    f = parse_res(F5, "x^3+1")
    poly, poles = partial_fractions(f)
    assert poles == {}
    assert poly.coeffs[3] == F5.one() and poly.coeffs[0] == F5.one()


def test_partial_fractions_order5_poles(F5):
    f = parse_res(F5, "1/x^5 + 1/(x-1)^7")
    _, poles = partial_fractions(f)
    data = {str(k): [str(c) for c in v] for k, v in poles.items()}
    assert data["0"][4] == "1" and all(c == "0" for c in data["0"][:4])
    assert data["1"][6] == "1" and all(c == "0" for c in data["1"][:6])


def test_partial_fractions_irreducible_denominator(F2):
    f = parse_res(F2, "1/(x^2+x+1)")
    with pytest.raises(IrreducibleDenominator):
        partial_fractions(f)


def test_partial_fractions_random_round_trip():
    rng = random.Random(20240)
    cases = 0
    for _ in range(500):
        f = field(rng.choice([2, 3, 5]))
        r = rand_ratfunc(rng, f)
        if r.is_zero():
            continue
        poly, poles = partial_fractions(r)
        assert recombine(r.ring, poly, poles) == r
        cases += 1
    assert cases >= 450


def test_pth_root_fixtures(F2, F5):
    # prime-subfield constants are fixed by the inverse Frobenius
    for v in range(5):
        c = F5.from_int(v)
        assert c.pth_root() ** 5 == c
    # monomial case x^2 over F_2(x)
    f = parse_res(F2, "x^2")
    assert f.pth_root() == parse_res(F2, "x")
    with pytest.raises(NotAPthPower):
        parse_res(F2, "x").pth_root()


def test_is_pth_power(F2, F5):
    assert parse_res(F2, "1/x^2").is_pth_power()
    assert not parse_res(F2, "1/x").is_pth_power()
    assert not parse_res(F5, "1/(x^2*(x-1))").is_pth_power()


def test_pth_root_random_property():
    rng = random.Random(99)
    for _ in range(60):
        f = field(rng.choice([2, 3, 5]))
        r = rand_ratfunc(rng, f, max_order=4)
        power = r ** f.p
        assert power.is_pth_power()
        assert power.pth_root() == r


# -- Laurent coefficients -----------------------------------------------------


def test_kelem_arithmetic(F2):
    t = KElem.t_power(F2, 1)
    u = KElem.const(F2.one()) + t
    assert (u * u).coeff(2) == F2.one()
    assert u.pth_root() ** 2 == u
    half = KElem.t_power(F2, Fraction(1, 2))
    assert (half * half) == t
    assert half.root_denominator() == 2
    assert t.shift(-3).valuation() == -2


def test_kelem_gcd_divexact(F2):
    one = KElem.const(F2.one())
    t = KElem.t_power(F2, 1)
    a = (one + t) * (one + t) * t
    b = (one + t) * t ** 3
    g = kelem_gcd(a, b)
    assert g == (one + t)  # unit-normalised: valuation 0, constant term 1
    assert kelem_divexact(a, g) == (one + t) * t
    assert kelem_divexact(b, g) == t ** 3


def test_laurent_poly_gcd_and_roots(F2):
    ring = Ring(F2, True)
    X = Poly.x(ring)
    b1 = KElem.t_power(F2, 2)
    b2 = KElem(F2, {Fraction(2): F2.one(), Fraction(4): F2.one()})  # t^2 + t^4
    f = (X - Poly.const(ring, b1)) ** 2 * (X - Poly.const(ring, b2))
    roots = dict(f.roots(require_all=True))
    assert roots[b1] == 2 and roots[b2] == 1
    g = f.gcd((X - Poly.const(ring, b1)) * (X - Poly.const(ring, b2)))
    assert g.degree() == 2


def test_laurent_lowest_terms(F2):
    one = parse_k(F2, "1")
    f = parse_k(F2, "(X-t)*(X-t^2)/((X-t)*(X-t^3))")
    assert f.den.degree() == 1 and f.num.degree() == 1
    g = parse_k(F2, "(1+t)/((1+t)*X)")
    assert g == parse_k(F2, "1/X")


@settings(max_examples=40, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(1, 4))
def test_kelem_valuation_multiplicative(e1, e2, denom):
    f = field(3)
    a = KElem.monomial(f.from_int(2), Fraction(e1, denom))
    b = KElem.monomial(f.from_int(1), Fraction(e2, denom))
    assert (a * b).valuation() == a.valuation() + b.valuation()


def test_local_series_fraction_coefficients(F2):
    f = parse_k(F2, "1/((X-t^2)*(X-t^2-t^4))")
    b1 = parse_k(F2, "t^2").const_value()
    lead = f.leading_at(b1)
    # 1/(b1 - b2) = 1/t^4 exactly
    assert lead.const_value() == KElem.t_power(F2, -4)


def test_infinity_support(F5):
    f = parse_res(F5, "x^3 + 1/x")
    assert INFINITY in f.pole_support()
    assert f.pole_order(INFINITY) == 3

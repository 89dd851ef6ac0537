from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ffgs.laurent import LPoly, bareiss_det, berkowitz
from ffgs.rings import BaseRing, Mod

from helpers import cofactor_det

Q, F2, F5 = BaseRing.QQ(), BaseRing.GF(2), BaseRing.GF(5)


# -- scalar rings -----------------------------------------------------------

def test_ring_membership_and_units():
    Z2 = BaseRing.localized(2)
    assert Z2.contains(Fraction(1, 3)) and not Z2.contains(Fraction(1, 2))
    assert Z2.is_unit(Fraction(3, 5)) and not Z2.is_unit(Fraction(6))
    assert Z2.valuation(Fraction(12, 5)) == 2
    Z = BaseRing.ZZ()
    assert Z.is_unit(-1) and not Z.is_unit(2)
    assert Z.fraction_field() == Q
    assert BaseRing.from_dict(Z2.to_dict()) == Z2


def test_localization_needs_a_prime():
    with pytest.raises(ValueError):
        BaseRing.localized(6)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_gcdex_is_invertible_and_eliminates(a, b):
    Z = BaseRing.ZZ()
    if a == 0 and b == 0:
        return
    g, s, t, u, v = Z.gcdex(a, b)
    assert s * a + t * b == g and u * a + v * b == 0
    assert abs(s * v - t * u) == 1
    assert g == sympy.gcd(a, b)


@given(st.integers(0, 4), st.integers(1, 4))
def test_mod_field_arithmetic(a, b):
    x, y = Mod(a, 5), Mod(b, 5)
    assert (x / y) * y == x
    assert x ** 5 == x
    assert F5.coerce(a) == x


# -- Laurent polynomials ----------------------------------------------------

coeffs = st.lists(st.integers(-4, 4), min_size=0, max_size=4)


def lp(cs, off, field=Q):
    return LPoly.from_list(cs, field, off)


laurent = st.builds(lp, coeffs, st.integers(-3, 3))


@given(laurent, laurent, laurent)
def test_laurent_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == LPoly({}, Q)


@given(laurent, laurent)
def test_exact_division_inverts_multiplication(a, b):
    if not b:
        return
    assert (a * b).exact_div(b) == a


def test_exact_division_detects_non_divisibility():
    u = LPoly.monomial(1, 1, Q)
    assert (u + 1).exact_div(u + 2) is None
    with pytest.raises(ArithmeticError):
        (u + 1) / (u + 2)
    assert (u ** -2) * (u ** 2) == 1


def test_laurent_evaluation_and_span():
    u = LPoly.monomial(1, 1, Q)
    f = 3 * u ** -1 + 2 + u ** 2
    assert f(Fraction(1)) == 6
    assert f.span() == 2 and f.degrees == (-1, 2)
    assert repr(f) == "3*u^-1 + 2 + u^2"


def test_characteristic_two_laurent():
    u = LPoly.monomial(1, 1, F2)
    assert (u + 1) * (u + 1) == u * u + 1


square = st.integers(1, 3).flatmap(lambda n: st.lists(
    st.lists(st.builds(lp, st.lists(st.integers(-2, 2), max_size=2), st.integers(-1, 1)),
             min_size=n, max_size=n), min_size=n, max_size=n))


@given(square)
def test_bareiss_matches_cofactor_oracle(rows):
    zero, one = LPoly({}, Q), LPoly.const(1, Q)
    assert bareiss_det(rows, zero, one) == cofactor_det(rows)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_berkowitz_matches_sympy_charpoly(rows):
    lam = sympy.Symbol("lam")
    expected = sympy.Matrix(rows).charpoly(lam).all_coeffs()[::-1]
    got = berkowitz([[Fraction(x) for x in r] for r in rows], Fraction(0), Fraction(1))
    assert got == [Fraction(int(c)) for c in expected]

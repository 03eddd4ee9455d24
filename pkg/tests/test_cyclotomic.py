import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pftori.cyclotomic import Cyclotomic, cyclotomic_poly


@pytest.mark.parametrize("r", range(1, 13))
def test_cyclotomic_polynomial_matches_sympy(r):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(r, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(r)) == [Fraction(int(c)) for c in expected]


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6, 8])
def test_zeta_has_order_r(r):
    z = Cyclotomic.zeta(r)
    assert z ** r == 1
    for k in range(1, r):
        assert z ** k != 1


def test_minus_one_in_second_field():
    assert Cyclotomic.zeta(2) == -1


def test_fourth_root_squared():
    assert Cyclotomic.zeta(4) ** 2 == -1


def test_sum_of_primitive_cube_roots():
    assert Cyclotomic.zeta(3) + Cyclotomic.zeta(3, 2) == -1


def test_inverse_and_division():
    a = Cyclotomic(5, [1, 2, 0, 3])
    assert a * a.inverse() == 1
    assert (a / a) == 1
    assert 1 / Cyclotomic.zeta(5) == Cyclotomic.zeta(5, 4)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.zero(3).inverse()


def test_mixing_fields_rejected():
    with pytest.raises(ValueError):
        Cyclotomic.zeta(3) + Cyclotomic.zeta(4)


def test_complex_value():
    assert abs(complex(Cyclotomic.zeta(6)) - cmath.exp(2j * cmath.pi / 6)) < 1e-15


def test_json_roundtrip():
    a = Cyclotomic(7, [Fraction(1, 2), -3, 0, 1])
    assert Cyclotomic.from_json(7, a.to_json()) == a


elements = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), max_size=6)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), elements, elements, elements)
def test_field_axioms_and_embedding(r, a, b, c):
    x, y, w = Cyclotomic(r, a), Cyclotomic(r, b), Cyclotomic(r, c)
    assert (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-9 * (1 + abs(complex(x) * complex(y)))
    if x:
        assert x * x.inverse() == 1

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pftori.exterior import (DimensionError, FormElement, dx, dy, two_form_from_matrix, wedge,
                             wedge_power)


def gen(n, i):
    return FormElement.monomial(n, (i,))


def test_repeated_generator_vanishes():
    a = gen(2, dx(1, 2))
    assert wedge(a, a).is_zero()


def test_antisymmetry_of_one_forms():
    a, b = gen(1, dx(1, 1)), gen(1, dy(1, 1))
    ab = wedge(a, b)
    assert ab.coefficient((dx(1, 1), dy(1, 1))) == 1
    assert wedge(b, a) == -ab


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        wedge(gen(1, 0), gen(2, 0))


def test_two_form_identity():
    f = two_form_from_matrix(np.eye(2, dtype=int).astype(object))
    expected = FormElement.monomial(2, (dx(1, 2), dy(1, 2))) + FormElement.monomial(2, (dx(2, 2), dy(2, 2)))
    assert f == expected


def test_two_form_zero():
    assert two_form_from_matrix(np.zeros((3, 3), dtype=int).astype(object)).is_zero()


def test_two_form_scale_and_exponent():
    f = two_form_from_matrix([[2]], Fraction(1, 3), scale_exp=1)
    assert f.scale_exp == 1
    assert f.coefficient((0, 1)) == Fraction(2, 3)


def test_wedge_power_exceeding_dimension():
    f = FormElement.monomial(1, (0, 1))
    assert wedge_power(f, 2).is_zero()


def test_wedge_power_of_standard_form():
    f = two_form_from_matrix(np.eye(2, dtype=int).astype(object))
    sq = wedge_power(f, 2)
    assert sq.coefficient((dx(1, 2), dy(1, 2), dx(2, 2), dy(2, 2))) == 2
    assert len(sq.terms) == 1


def test_wedge_power_rank_one_vanishes():
    u = np.array([1, -2, 3], dtype=object)
    v = np.array([2, 1, 1], dtype=object)
    assert wedge_power(two_form_from_matrix(np.outer(u, v)), 2).is_zero()


def test_wedge_power_rejects_odd_forms():
    with pytest.raises(ValueError):
        wedge_power(gen(2, 0), 2)


def test_mixed_scale_exponents_refuse_to_add():
    with pytest.raises(ValueError):
        FormElement.scalar(1, 1, 0) + FormElement.scalar(1, 1, 1)


def test_minor_pattern_of_square():
    """Square of dx^t alpha^t dy matches 2 * sum of minors on dx_k dy_i dx_l dy_j."""
    alpha = np.array([[1, 2, 0], [3, -1, 4], [2, 2, 5]], dtype=object)
    n = 3
    sq = wedge_power(two_form_from_matrix(alpha.T), 2)
    for i, j in itertools.combinations(range(n), 2):
        for k, l in itertools.combinations(range(n), 2):
            minor = alpha[i, k] * alpha[j, l] - alpha[i, l] * alpha[j, k]
            assert sq.coefficient((k, n + i, l, n + j)) == 2 * minor


small = st.integers(-3, 3)


def random_form(draw, n, degree):
    gens = list(itertools.combinations(range(2 * n), degree))
    chosen = draw(st.lists(st.sampled_from(gens), max_size=4, unique=True))
    coefs = draw(st.lists(small, min_size=len(chosen), max_size=len(chosen)))
    return FormElement(n, {g: Fraction(c) for g, c in zip(chosen, coefs)})


@st.composite
def triples(draw):
    n = draw(st.integers(1, 3))
    degs = draw(st.lists(st.integers(0, min(3, 2 * n)), min_size=3, max_size=3))
    return n, [random_form(draw, n, d) for d in degs], degs


@settings(max_examples=60, deadline=None)
@given(triples())
def test_associativity_and_graded_antisymmetry(data):
    n, (a, b, c), (da, db, _) = data
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    sign = (-1) ** (da * db)
    assert wedge(a, b) == wedge(b, a).scale(sign)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_wedge_power_is_iterated_wedge(n, k, data):
    M = np.array(data.draw(st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)),
                 dtype=object)
    f = two_form_from_matrix(M)
    it = f
    for _ in range(k - 1):
        it = wedge(f, it)
    assert wedge_power(f, k) == it


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.data())
def test_product_of_two_forms_matches_brute_force(n, data):
    mat = st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)
    M = np.array(data.draw(mat), dtype=object)
    N = np.array(data.draw(mat), dtype=object)
    prod = wedge(two_form_from_matrix(M), two_form_from_matrix(N))
    # term-by-term: sum over (i,j),(k,l) of M_ij N_kl dx_i dy_j dx_k dy_l
    expected = FormElement.zero(n)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        expected = expected + FormElement.monomial(n, (i, n + j, k, n + l), M[i, j] * N[k, l])
    assert prod == expected

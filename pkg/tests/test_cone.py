from fractions import Fraction

import numpy as np
import pytest
import sympy

from pftori import linalg as la
from pftori.bundle import BundleData, PreconditionError
from pftori.cone import (ChernVector, chern_character, chern_degree_condition, chern_of, chern_of_blocks,
                         ci_factor_coefficient, ci_factorization_check, ci_lhs, cone_projectively_flat,
                         cone_target, omega_prime, reduction_chain, section5_fixture, standard_W)
from pftori.exterior import dx, dy
from pftori.heisenberg import CocycleSet, cyc_identity
from pftori.sampling import random_rational_matrix, rng_for
from pftori.scalars import QI, PiLinear
from pftori.torus import TorusData

i = QI(0, 1)


def random_int(rng, n, lo=-2, hi=2):
    return rng.integers(lo, hi + 1, (n, n)).astype(object)


def test_chern_of_unit_bundle():
    ch = chern_of(1, [[1]])
    assert ch.n == 1
    assert ch[0].coefficient(()) == 1
    assert ch[1].scale_exp == 1 and ch[1].coefficient((dx(1, 1), dy(1, 1))) == 1


def test_chern_top_degree_on_surface():
    ch = chern_of(2, [[1, 0], [0, 1]])
    # (1/2) * 2 * (Omega')^2 with Omega' = (1/2) sum dx_i dy_i
    assert ch[2].coefficient((dx(1, 2), dy(1, 2), dx(2, 2), dy(2, 2))) == Fraction(1, 2)


def test_chern_character_requires_holomorphic():
    T = TorusData.validated(la.exact_array([[i, 0], [0, i]]))
    assert chern_character(BundleData(1, [[1, 0], [0, 1]]), T) == chern_of(1, [[1, 0], [0, 1]])
    with pytest.raises(PreconditionError):
        chern_character(BundleData(1, [[0, 1], [0, 0]]), T)


def test_chern_additive_over_blocks():
    rng = rng_for(1)
    for n in (1, 2, 3):
        for _ in range(3):
            blocks = [(int(rng.integers(1, 4)), random_int(rng, n)) for _ in range(2)]
            assert chern_of_blocks(blocks) == chern_of(*blocks[0]) + chern_of(*blocks[1])


def test_chern_vector_dimension_mismatch():
    with pytest.raises(ValueError):
        chern_of(1, [[1]]) + chern_of(1, [[1, 0], [0, 1]])
    assert isinstance(chern_of(1, [[1]]), ChernVector)


def test_cone_target_examples():
    t, C = cone_target(1, [[1]], 2, [[-2]])
    assert t == 3 and C.tolist() == [[-1]]
    t, C = cone_target(2, np.eye(2, dtype=int), 3, np.eye(2, dtype=int))
    assert t == 5 and C.tolist() == [[2, 0], [0, 2]]


def test_projective_flatness_examples():
    assert cone_projectively_flat(1, [[1]], 2, [[2]]).pf
    res = cone_projectively_flat(1, [[1, 0], [0, 1]], 1, [[0, 0], [0, 0]])
    assert not res.pf
    assert res.minors == [{"i": 1, "j": 2, "k": 1, "l": 2, "value": "1"}]
    assert cone_projectively_flat(1, [[1, 1], [1, 1]], 1, [[0, 0], [0, 0]]).pf


def test_projective_flatness_requires_holomorphic_inputs():
    T = TorusData.validated(la.exact_array([[i, 0], [0, i]]))
    with pytest.raises(PreconditionError):
        cone_projectively_flat(1, [[0, 1], [0, 0]], 1, [[0, 0], [0, 0]], T)


def test_reduction_chain_random():
    rng = rng_for(11)
    for _ in range(30):
        n = int(rng.integers(1, 4))
        r, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        out = reduction_chain(r, random_int(rng, n), s, random_int(rng, n))
        assert out["c0"] and out["c1"]
        assert len({out[k] for k in ("c2", "c2'", "c2''", "c2'''")}) == 1


def test_reduction_chain_with_wrong_target():
    out = reduction_chain(1, [[1]], 1, [[1]], 3, [[2]])
    assert not out["c0"]


def test_factor_coefficients_small_case():
    # i = 3: t^2 (r a^3 + s b^3) - (r a + s b)^3 = rs (a - b)^2 ((2r + s) a + (r + 2s) b)
    r, s = 2, 5
    assert ci_factor_coefficient(3, 0, r, s) == r * r * s * 2 + r * s * s
    assert ci_factor_coefficient(3, 1, r, s) == r * r * s + 2 * r * s * s


@pytest.mark.parametrize("i_", [3, 4, 5, 6, 7])
def test_factorization_polynomial_identity(i_):
    """Two-forms commute, so the identity is one of polynomials in two variables."""
    a, b = sympy.symbols("a b")
    for r, s in [(1, 1), (2, 3), (5, 2), (4, 7)]:
        t = r + s
        lhs = t ** (i_ - 1) * (r * a ** i_ + s * b ** i_) - (r * a + s * b) ** i_
        rhs = (a - b) ** 2 * sum(ci_factor_coefficient(i_, l, r, s) * a ** (i_ - l - 2) * b ** l
                                 for l in range(i_ - 1))
        assert sympy.expand(lhs - rhs) == 0


@pytest.mark.parametrize("i_,n", [(3, 3), (3, 4), (4, 4)])
def test_factorization_on_forms(i_, n):
    rng = rng_for(i_ * 10 + n)
    for _ in range(3):
        r, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        assert ci_factorization_check(i_, n, r, s, random_int(rng, n, -1, 1), random_int(rng, n, -1, 1))


def test_factorization_guards():
    with pytest.raises(ValueError):
        ci_factorization_check(2, 3, 1, 1, np.eye(3, dtype=int), np.eye(3, dtype=int))
    with pytest.raises(ValueError):
        ci_factorization_check(4, 3, 1, 1, np.eye(3, dtype=int), np.eye(3, dtype=int))
    with pytest.raises(ValueError):
        ci_factorization_check(3, 3, 1, 1, np.eye(2, dtype=int), np.eye(3, dtype=int))


def test_degree_condition_matches_expanded_form():
    rng = rng_for(5)
    for _ in range(6):
        n = 3
        r, s = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        A, B = random_int(rng, n, -1, 1), random_int(rng, n, -1, 1)
        lhs = ci_lhs(3, r, omega_prime(r, A), s, omega_prime(s, B))
        assert chern_degree_condition(3, r, A, s, B) == lhs.is_zero()
        if cone_projectively_flat(r, A, s, B).pf:
            assert chern_degree_condition(3, r, A, s, B)


def test_rank_one_alpha_gives_flat_cone():
    rng = rng_for(8)
    for _ in range(5):
        alpha = random_rational_matrix(rng, 3, rank_at_most_one=True)
        # A/r - B/s = alpha with r = s = lcm of denominators
        den = int(np.lcm.reduce([Fraction(x).denominator for x in alpha.flat]))
        B = random_int(rng, 3)
        A = np.vectorize(lambda x: int(x), otypes=[object])(alpha * den + B)
        assert cone_projectively_flat(den, A, den, B).pf


def test_fixture_square_torus():
    out = section5_fixture(i, 0, 0)
    assert out["ok"], out["checks"]
    assert out["eta"] == {"re": "pi", "im": "pi"}


def test_fixture_other_parameters():
    assert section5_fixture(QI(0, 2), PiLinear(0, 1), PiLinear(0, QI(0, 2)))["ok"]
    assert section5_fixture(QI(Fraction(1, 2), 1), QI(1, 1), 0)["ok"]
    assert section5_fixture(0.25 + 1.5j, 0.1, 0.2j)["ok"]


def test_fixture_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        section5_fixture(-i, 0, 0)


def test_fixture_with_wrong_cocycle_fails_check_a():
    one = cyc_identity(2, 2)
    out = section5_fixture(i, 0, 0, CocycleSet(2, [one], [one], 2))
    assert not out["checks"]["a_cocycle"] and not out["ok"]
    assert standard_W().rank == 2

import math
from fractions import Fraction

import numpy as np
import pytest

from pftori import linalg as la
from pftori.bundle import (BundleData, PreconditionError, connection_local_xy, curvature_R,
                           generator_pairings, hermitian_check, is_holomorphic, mu_from_pq, mu_split,
                           normalized_curvature)
from pftori.exterior import FormElement
from pftori.sampling import random_holomorphic_bundle, rng_for
from pftori.scalars import QI, PiLinear
from pftori.torus import TorusData

i = QI(0, 1)


def torus(rows):
    return TorusData.validated(la.exact_array(rows))


def test_symmetric_A_on_square_torus_is_holomorphic():
    assert is_holomorphic(BundleData(1, [[1, 2], [2, -1]]), torus([[i, 0], [0, i]])).holomorphic


def test_nilpotent_A_is_not_holomorphic():
    rep = is_holomorphic(BundleData(1, [[0, 1], [0, 0]]), torus([[i, 0], [0, i]]))
    assert not rep.holomorphic
    assert rep.at_residual[0, 1] == i


def test_diagonal_example_is_holomorphic():
    T = torus([[i, 0], [0, QI(0, Fraction(3, 2))]])
    assert is_holomorphic(BundleData(1, [[1, 0], [0, 2]]), T).holomorphic


def test_non_symmetric_A_with_compatible_T():
    # A T symmetric although neither A nor T is
    T = torus([[QI(1, 1), QI(0, 1)], [QI(0, 0), QI(0, 1)]])
    A = [[1, 0], [-1, 2]]
    AT = la.exact_array(A) @ T.T
    assert is_holomorphic(BundleData(1, A), T).holomorphic == la.is_symmetric(AT)


def test_bundle_rejects_bad_data():
    with pytest.raises(ValueError):
        BundleData(0, [[1]])
    with pytest.raises(ValueError):
        BundleData(1, [[Fraction(1, 2)]])


def test_mu_split_examples():
    T = torus([[i]])
    p, q = mu_split(la.exact_array([QI(1, 2)]), T)
    assert (p[0], q[0]) == (1, 2)
    p, q = mu_split(la.exact_array([QI(3, 0)]), T)
    assert (p[0], q[0]) == (3, 0)


def test_mu_split_roundtrip_random():
    rng = rng_for(5)
    for _ in range(20):
        bundle, T = random_holomorphic_bundle(rng, 2)
        p, q = mu_split(bundle.mu, T)
        assert all(a == b for a, b in zip(mu_from_pq(p, q, T), bundle.mu))


def test_mu_split_with_pi():
    T = torus([[i]])
    p, q = mu_split(np.array([PiLinear(0, 1) + PiLinear(0, i)], dtype=object), T)
    assert p[0] == PiLinear(0, 1) and q[0] == PiLinear(0, 1)


def test_R_for_unit_example():
    R = curvature_R(BundleData(1, [[1]]), torus([[i]]))
    assert R.R_over_pi[0, 0] == Fraction(1, 4)
    assert abs(R.R[0, 0] - 1 / (4 * math.pi)) < 1e-15


def test_R_vanishes_for_zero_A():
    assert la.all_zero(curvature_R(BundleData(1, [[0]]), torus([[i]])).R_over_pi)


def test_R_diagonal_example():
    R = curvature_R(BundleData(1, [[2, 0], [0, 4]]), torus([[i, 0], [0, QI(0, 2)]]))
    assert [[R.R_over_pi[a, b] for b in range(2)] for a in range(2)] == [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]


def test_R_requires_holomorphic():
    with pytest.raises(PreconditionError):
        curvature_R(BundleData(1, [[0, 1], [0, 0]]), torus([[i, 0], [0, i]]))


def test_generator_pairings_unit_example():
    table = {(e.kind, e.j, e.k): e for e in generator_pairings(BundleData(1, [[1]]), torus([[i]]))}
    mixed = table[("gamma,gamma'", 1, 1)]
    assert mixed.value_over_pi == QI(0, -1)
    assert table[("gamma',gamma'", 1, 1)].value_over_pi == 1
    assert table[("gamma',gamma", 1, 1)].value_over_pi.imag == 1


def test_generator_pairings_zero_A():
    for e in generator_pairings(BundleData(1, [[0, 0], [0, 0]]), torus([[i, 0], [0, i]])):
        assert e.value_over_pi == 0


def test_generator_pairings_random():
    rng = rng_for(9)
    for _ in range(15):
        bundle, T = random_holomorphic_bundle(rng, int(rng.integers(1, 4)))
        assert all(e.ok for e in generator_pairings(bundle, T))


def test_hermitian_symmetry():
    rng = rng_for(2)
    bundle, T = random_holomorphic_bundle(rng, 2)
    form = curvature_R(bundle, T)
    for _ in range(10):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert hermitian_check(form, z, w)


def test_connection_examples():
    assert np.allclose(connection_local_xy(BundleData(1, [[1]]), [0.0]), [0])
    assert np.allclose(connection_local_xy(BundleData(1, [[1]]), [2 * math.pi]), [-1j])


def test_connection_derivative_is_curvature():
    """d(omega) = sum_ij d(coef_j)/dx_i dx_i ^ dy_j must equal -(i/2pi r) dx^t A^t dy."""
    A = np.array([[1, 2], [-1, 3]])
    bundle = BundleData(3, A, np.array([QI(1, 2), QI(0, -1)], dtype=object))
    rng = rng_for(0)
    x = rng.normal(size=2)
    h = 1e-6
    expected = -1j / (2 * math.pi * 3) * A.T
    for a in range(2):
        e = np.zeros(2)
        e[a] = h
        deriv = (connection_local_xy(bundle, x + e) - connection_local_xy(bundle, x - e)) / (2 * h)
        assert np.allclose(deriv, expected[a], atol=1e-8)


def test_normalized_curvature():
    f = normalized_curvature(BundleData(2, [[1, 3], [0, 1]]))
    assert f.scale_exp == 1
    assert f.coefficient((0, 3)) == Fraction(0)
    assert f.coefficient((1, 2)) == Fraction(3, 2)
    assert isinstance(f, FormElement)


def test_bundle_json_roundtrip():
    b = BundleData(2, [[1]], np.array([QI(Fraction(1, 2), 3)], dtype=object))
    back = BundleData.from_json(b.to_json())
    assert back.r == 2 and back.mu[0] == b.mu[0]

import math
from fractions import Fraction

import numpy as np
import pytest

from pftori import linalg as la
from pftori.scalars import QI
from pftori.torus import (LatticeVector, TorusData, TorusError, lattice_embed, validate_torus, xy_to_z,
                          zy_coords)

i = QI(0, 1)


def exact(rows):
    return la.exact_array(rows)


def test_identity_times_i_is_valid():
    assert validate_torus(exact([[i, 0], [0, i]])).valid


def test_negative_imaginary_part_rejected():
    rep = validate_torus(exact([[i, 0], [0, -i]]))
    assert not rep.im_positive_definite
    assert rep.failing_minor == 2


def test_indefinite_imaginary_part_rejected():
    rep = validate_torus(exact([[i, 2 * i], [2 * i, i]]))
    assert not rep.valid
    assert rep.failing_minor == 2 and rep.minor_value == -3


def test_non_square_rejected():
    with pytest.raises(TorusError):
        validate_torus(np.zeros((2, 3), dtype=complex))


def test_validated_constructor_raises():
    with pytest.raises(TorusError):
        TorusData.validated(exact([[-i]]))


def test_float_torus_validates():
    assert validate_torus(np.array([[0.3 + 1.2j]])).valid


def test_lattice_embed_generators():
    T = TorusData.validated(exact([[i, 0], [0, 2 * i]]))
    assert np.allclose(lattice_embed(LatticeVector.gamma(1, 2), T), [2 * math.pi, 0])
    assert np.allclose(lattice_embed(LatticeVector.gamma_prime(1, 2), T), [2j * math.pi, 0])


def test_lattice_embed_sum_for_tau():
    tau = QI(Fraction(1, 3), 2)
    T = TorusData.validated(exact([[tau]]))
    v = LatticeVector((1,), (1,))
    assert np.allclose(lattice_embed(v, T), [2 * math.pi + 2 * math.pi * complex(tau)])


def test_lattice_embed_is_linear():
    T = TorusData.validated(exact([[QI(1, 2), QI(0, 1)], [QI(0, 1), QI(-1, 3)]]))
    a, b = LatticeVector((1, -2), (0, 3)), LatticeVector((2, 1), (-1, 1))
    assert np.allclose(lattice_embed(a + b, T), lattice_embed(a, T) + lattice_embed(b, T))
    assert np.allclose(lattice_embed(3 * a, T), 3 * lattice_embed(a, T))


def test_zy_of_real_point():
    T = TorusData.validated(exact([[QI(1, 1)]]))
    x, y = zy_coords(exact([QI(5, 0)]), T)
    assert list(x) == [5] and list(y) == [0]


def test_zy_example():
    T = TorusData.validated(exact([[i]]))
    x, y = zy_coords(exact([QI(1, 2)]), T)
    assert (x[0], y[0]) == (1, 2)


def test_zy_roundtrip_exact():
    T = TorusData.validated(exact([[QI(1, 2), QI(0, 1)], [QI(1, 1), QI(2, 3)]]))
    z = exact([QI(Fraction(1, 2), 3), QI(-2, Fraction(5, 7))])
    x, y = zy_coords(z, T)
    assert all(a == b for a, b in zip(xy_to_z(x, y, T), z))


def test_zy_roundtrip_float():
    rng = np.random.default_rng(1)
    T = TorusData.validated(np.array([[0.3 + 1.1j, 0.2j], [0.1, -0.4 + 0.9j]]))
    for _ in range(20):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        x, y = zy_coords(z, T)
        assert np.allclose(x + T.T @ y, z, atol=1e-12)


def test_torus_json_roundtrip():
    T = TorusData.validated(exact([[QI(Fraction(1, 2), 1)]]))
    back = TorusData.from_json(T.to_json())
    assert back.T[0, 0] == T.T[0, 0]

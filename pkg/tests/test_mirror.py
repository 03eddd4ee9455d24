from fractions import Fraction

import numpy as np
import pytest

from pftori import linalg as la
from pftori.bundle import BundleData
from pftori.mirror import (AffineLagrangian, PiVector, alpha_beta, check_witness, codim_bound_check,
                           intersection_codim, lagrangian_check, minors_vanish, symplectic_data)
from pftori.sampling import random_consistent_lagrangians, random_generic_pair, rng_for
from pftori.scalars import QI, PiLinear
from pftori.torus import TorusData

i = QI(0, 1)
PI = PiLinear(0, 1)


def torus(rows):
    return TorusData.validated(la.exact_array(rows))


def test_symplectic_data_square_torus():
    sd = symplectic_data(torus([[i]]))
    assert sd.omega[0, 0] == -1 and sd.Bfield[0, 0] == 0


def test_symplectic_data_reconstructs_inverse():
    T = torus([[QI(1, 2), QI(0, 1)], [QI(0, 1), QI(-1, 3)]])
    sd = symplectic_data(T)
    assert la.all_zero(sd.Bfield + i * sd.omega - la.inv(T.T).T)


def test_lagrangian_check_examples():
    rep = lagrangian_check([[1]], torus([[i]]))
    assert rep.lagrangian and rep.flat_system and rep.at_symmetric
    rep = lagrangian_check([[0, 1], [0, 0]], torus([[i, 0], [0, i]]))
    assert not rep.lagrangian and rep.flat_system and not rep.at_symmetric
    assert rep.equivalent_to_AT_symmetric


def test_lagrangian_equivalence_on_random_pairs():
    rng = rng_for(7)
    for _ in range(40):
        A, T = random_generic_pair(rng, int(rng.integers(1, 4)))
        assert lagrangian_check(A, T).equivalent_to_AT_symmetric


def test_alpha_beta_example():
    L1 = AffineLagrangian(1, [[1]], (0,))
    L2 = AffineLagrangian(2, [[1]], (PI,))
    alpha, beta = alpha_beta(L1, L2)
    assert alpha[0, 0] == Fraction(1, 2)
    assert beta.rational == (0,) and beta.pi_part == (Fraction(1, 2),)


def test_alpha_beta_dimension_mismatch():
    with pytest.raises(ValueError):
        alpha_beta(AffineLagrangian(1, [[1]], (0,)), AffineLagrangian(1, [[1, 0], [0, 1]], (0, 0)))


def test_from_bundle_uses_mu_split():
    L = AffineLagrangian.from_bundle(BundleData(2, [[1]], np.array([QI(1, 3)], dtype=object)), torus([[i]]))
    assert L.p == (1,) and L.q == (3,)


def test_minors_vanish_examples():
    assert minors_vanish([[1, 2], [2, 4]])
    assert not minors_vanish([[1, 0], [0, 1]])
    assert minors_vanish([[0, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert minors_vanish([[Fraction(1, 2), 1, 0], [1, 2, 0], [0, 0, 0]])


def test_codim_one_line():
    res = intersection_codim([[1, 1], [2, 2]], PiVector.of([1, 2]))
    assert res.codim == 1 and res.minors_vanish
    assert check_witness([[1, 1], [2, 2]], PiVector.of([1, 2]), res.witness)
    assert res.witness["pivot"] == [1, 1]


def test_inconsistent_rank_one_system_is_empty():
    res = intersection_codim([[1, 1], [2, 2]], PiVector.of([1, 3]))
    assert res.empty and res.alpha_rank == 1


def test_pi_parts_must_both_be_solvable():
    alpha = [[1, 0], [1, 0]]
    assert intersection_codim(alpha, PiVector.of([PI, PI])).codim == 1
    assert intersection_codim(alpha, PiVector.of([1 + PI, PiLinear(1, 2)])).empty


def test_full_rank_is_codim_n():
    res = intersection_codim([[1, 0], [0, 1]], PiVector.of([PI, 3]))
    assert res.codim == 2 and not res.minors_vanish
    assert check_witness([[1, 0], [0, 1]], PiVector.of([PI, 3]), res.witness)


def test_zero_alpha_cases():
    assert intersection_codim([[0]], PiVector.of([2 * PI])).codim == 0
    assert intersection_codim([[0]], PiVector.of([0])).codim == 0
    assert intersection_codim([[0]], PiVector.of([PI])).empty


def test_torus_mode_finds_shifted_intersection():
    L1 = AffineLagrangian(2, [[1]], (0,))
    L2 = AffineLagrangian(2, [[1]], (2 * PI,))
    alpha, beta = alpha_beta(L1, L2)
    assert intersection_codim(alpha, beta).empty
    res = intersection_codim(alpha, beta, "torus", L1=L1, L2=L2)
    assert res.codim == 0 and res.shift["k_prime"] in ([1], [-1])


def test_torus_mode_guards():
    L1 = AffineLagrangian(1, [[0]], (1,))
    alpha, beta = alpha_beta(L1, AffineLagrangian(1, [[0]], (0,)))
    with pytest.raises(ValueError):
        intersection_codim(alpha, beta, "torus")
    with pytest.raises(ValueError):
        intersection_codim(alpha, beta, "nowhere")
    with pytest.raises(ValueError):
        intersection_codim(alpha, beta, "torus", L1=L1, L2=L1, K=30, max_shifts=5)


def test_float_inputs_are_not_authoritative():
    res = intersection_codim(np.array([[1.0, 1.0], [2.0, 2.0]]), np.array([1.0, 2.0]))
    assert res.codim == 1 and not res.authoritative


def test_codim_bound_examples():
    T = torus([[i, 0], [0, i]])
    L1 = AffineLagrangian(1, [[1, 0], [0, 1]], (0, 0))
    L2 = AffineLagrangian(1, [[1, 0], [0, 0]], (0, PI))
    chk = codim_bound_check(L1, L2, T)
    assert chk.cone_pf_possible and chk.bound_holds and chk.result.codim == 1
    chk = codim_bound_check(L1, AffineLagrangian(1, [[0, 0], [0, 0]], (0, 0)), T)
    assert not chk.cone_pf_possible and chk.bound_holds


def test_codim_bound_flags_inconsistent_input():
    T = torus([[i]])
    chk = codim_bound_check(AffineLagrangian(1, [[1]], (0,)), AffineLagrangian(1, [[1]], (1,)), T)
    assert chk.outside_hypothesis and chk.bound_holds and chk.notes


def test_codim_bound_rejects_non_lagrangian():
    T = torus([[i, 0], [0, i]])
    bad = AffineLagrangian(1, [[0, 1], [0, 0]], (0, 0))
    with pytest.raises(ValueError):
        codim_bound_check(bad, bad, T)


def test_random_consistent_pairs_meet_in_codim_at_most_one():
    rng = rng_for(3)
    for _ in range(30):
        L1, L2, T = random_consistent_lagrangians(rng, int(rng.integers(1, 4)))
        chk = codim_bound_check(L1, L2, T)
        assert chk.cone_pf_possible and not chk.result.empty
        assert chk.result.codim <= 1
        if chk.result.witness and chk.result.witness.get("particular"):
            assert check_witness(*alpha_beta(L1, L2), chk.result.witness)


def test_json_roundtrip():
    L = AffineLagrangian(3, [[1, 2], [2, 1]], (PiLinear(Fraction(1, 3), 2), Fraction(-1, 2)))
    back = AffineLagrangian.from_json(L.to_json())
    assert back.to_json() == L.to_json()

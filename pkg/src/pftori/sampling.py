"""Seeded random instances for the property suites.

Holomorphic pairs (T, A) need AX and AY symmetric where T = X + iY.  Two
families produce them with exact rational entries:

* ``"commuting"``: A symmetric, X = x0 I + x1 A, Y = c I + d A^2.
* ``"adjugate"``: Y0 = G^t G for an invertible integer G, A = S adj(Y0),
  T = Y0 (c S + d I) + i lam Y0.  Then AY0 = det(Y0) S is symmetric and so is
  A Y0 (c S + d I).

Every draw goes through the torus validator; degenerate draws are retried.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from . import linalg as la
from .bundle import BundleData, is_holomorphic
from .heisenberg import CocycleSet, construct_standard
from .mirror import AffineLagrangian, PiVector
from .scalars import QI, PiLinear
from .torus import TorusData, validate_torus

FAMILIES = ("commuting", "adjugate")


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ints(rng, shape, lo=-2, hi=2) -> np.ndarray:
    return np.array(rng.integers(lo, hi + 1, size=shape).tolist(), dtype=object)


def _frac(rng, lo=-3, hi=3, den=4) -> Fraction:
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


def random_symmetric(rng, n: int, lo=-2, hi=2) -> np.ndarray:
    M = _ints(rng, (n, n), lo, hi)
    return np.triu(M) + np.triu(M, 1).T


def random_rank_one_symmetric(rng, n: int) -> np.ndarray:
    w = _ints(rng, (n,), -1, 1)
    k = int(rng.integers(-2, 3))
    return k * np.outer(w, w)


def _invertible_int(rng, n: int) -> np.ndarray:
    while True:
        G = _ints(rng, (n, n))
        if la.det(la.rational_array(G)) != 0:
            return G


def adjugate(M) -> np.ndarray:
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if n == 1:
        return np.array([[1]], dtype=object)
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(M, j, axis=0), i, axis=1)
            out[i, j] = (-1) ** (i + j) * int(la.det(la.rational_array(minor)).re)
    return out


def _torus(X, Y) -> Optional[TorusData]:
    n = X.shape[0]
    T = np.empty((n, n), dtype=object)
    for idx in np.ndindex(n, n):
        T[idx] = QI(X[idx], Y[idx])
    if not validate_torus(T).valid:
        return None
    return TorusData(n, T)


def _commuting(rng, n):
    A = random_symmetric(rng, n)
    x0, x1 = _frac(rng), _frac(rng)
    c, d = Fraction(int(rng.integers(1, 5)), 2), Fraction(int(rng.integers(0, 3)), 4)
    eye = np.eye(n, dtype=int).astype(object)
    X = eye * x0 + A * x1
    Y = eye * c + (A @ A) * d
    return A, _torus(X, Y)


def _adjugate(rng, n):
    G = _invertible_int(rng, n)
    Y0 = G.T @ G
    S = random_symmetric(rng, n)
    A = S @ adjugate(Y0)
    c, d = _frac(rng, -1, 1), _frac(rng, -1, 1)
    lam = Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
    X = Y0 @ (S * c + np.eye(n, dtype=int).astype(object) * d)
    return A, _torus(X, Y0 * lam)


def random_holomorphic_pair(rng, n: int, family: Optional[str] = None) -> Tuple[np.ndarray, TorusData]:
    while True:
        fam = family or FAMILIES[int(rng.integers(len(FAMILIES)))]
        A, torus = (_commuting if fam == "commuting" else _adjugate)(rng, n)
        if torus is not None:
            return A, torus


def random_mu(rng, n: int) -> np.ndarray:
    return np.array([QI(_frac(rng), _frac(rng)) for _ in range(n)], dtype=object)


def random_holomorphic_bundle(rng, n: int, *, r: Optional[int] = None,
                              family: Optional[str] = None) -> Tuple[BundleData, TorusData]:
    A, torus = random_holomorphic_pair(rng, n, family)
    r = int(rng.integers(1, 5)) if r is None else r
    bundle = BundleData(r, A, random_mu(rng, n))
    assert is_holomorphic(bundle, torus).holomorphic
    return bundle, torus


def random_bundle_with_cocycle(rng, n: int, *, family: Optional[str] = None,
                               max_tries: int = 1000) -> Tuple[BundleData, TorusData]:
    """A holomorphic bundle carrying the standard cocycle set; draws with no set at rank r are redrawn."""
    for _ in range(max_tries):
        bundle, torus = random_holomorphic_bundle(rng, n, family=family)
        cs = construct_standard(bundle.r, bundle.A)
        if isinstance(cs, CocycleSet):
            return BundleData(bundle.r, bundle.A, bundle.mu, cs), torus
    raise RuntimeError("no bundle with a cocycle set found")


def random_generic_pair(rng, n: int) -> Tuple[np.ndarray, TorusData]:
    """Unconstrained integer A with a valid rational torus; usually not holomorphic."""
    while True:
        G = _ints(rng, (n, n))
        Y = G.T @ G + np.eye(n, dtype=int).astype(object)
        X = np.vectorize(lambda _: _frac(rng), otypes=[object])(np.zeros((n, n)))
        torus = _torus(X, Y)
        if torus is not None:
            return _ints(rng, (n, n)), torus


def random_pi_vector(rng, n: int) -> PiVector:
    return PiVector(tuple(_frac(rng) for _ in range(n)), tuple(_frac(rng) for _ in range(n)))


def _offsets(v: PiVector):
    return tuple(PiLinear(a, b) if b else a for a, b in zip(v.rational, v.pi_part))


def random_consistent_lagrangians(rng, n: int):
    """Pairs of Lagrangian graphs whose alpha has rank <= 1 and whose system is solvable.

    On T = i Y0 with Y0 = G^t G: A = r (X + W) adj(Y0), B = s X adj(Y0) with
    X symmetric and W symmetric of rank <= 1, so alpha = W adj(Y0).  The
    offsets make beta = alpha x0; when alpha = 0 they make beta a 2pi-lattice
    vector, otherwise an arbitrary x0 is used.
    """
    G = _invertible_int(rng, n)
    Y0 = G.T @ G
    torus = TorusData(n, np.vectorize(lambda y: QI(0, y), otypes=[object])(Y0))
    r, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    adj = adjugate(Y0)
    X = random_symmetric(rng, n)
    W = random_rank_one_symmetric(rng, n)
    A, B = r * (X + W) @ adj, s * X @ adj
    alpha = (W @ adj).astype(object)
    p = random_pi_vector(rng, n)
    if not any(alpha.flat):
        k = _ints(rng, (n,))
        beta = PiVector((Fraction(0),) * n, tuple(Fraction(2 * int(x)) for x in k))
    else:
        x0 = random_pi_vector(rng, n)
        apply = lambda v: tuple(sum(Fraction(alpha[i, j]) * v[j] for j in range(n))  # noqa: E731
                                for i in range(n))
        beta = PiVector(apply(x0.rational), apply(x0.pi_part))
    u = (beta + p.scale(Fraction(1, r))).scale(s)
    L1 = AffineLagrangian(r, A, _offsets(p))
    L2 = AffineLagrangian(s, B, _offsets(u))
    return L1, L2, torus


def random_rational_matrix(rng, n: int, rank_at_most_one: bool = False) -> np.ndarray:
    if rank_at_most_one:
        a = np.array([_frac(rng) for _ in range(n)], dtype=object)
        b = np.array([_frac(rng) for _ in range(n)], dtype=object)
        return np.outer(a, b)
    return np.vectorize(lambda _: _frac(rng), otypes=[object])(np.zeros((n, n)))

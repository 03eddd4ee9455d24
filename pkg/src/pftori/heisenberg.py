"""Transition-matrix sets {V_j, U_k} for projectively flat bundles.

A set of rank ``N`` over ``Q(zeta_r)`` is valid for ``(r, A)`` when

    V_j V_k = V_k V_j,   U_j U_k = U_k U_j,   w^(-a_kj) U_k V_j = V_j U_k

with ``w = zeta_r`` primitive and ``a_kj = A[k, j]``.  The module builds such
sets from clock and shift matrices, verifies them exactly, and decides
existence both by a Smith normal form count and by exhaustive search over
monomial matrices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import Cyclotomic


class GuardError(ValueError):
    """Search request beyond the configured tractability limits."""


@dataclass(frozen=True)
class NoSolution:
    r: int
    minimal_dimension: int
    reason: str

    def to_json(self):
        return {"status": "no_solution", "r": self.r, "m": self.minimal_dimension,
                "reason": self.reason}


@dataclass(frozen=True)
class Exhausted:
    r: int
    rank: int
    candidates: int
    nodes: int

    def to_json(self):
        return {"status": "exhausted", "r": self.r, "rank": self.rank,
                "candidates": self.candidates, "nodes": self.nodes}


# -- matrices over Q(zeta_r) ----------------------------------------------

def cyc_identity(r: int, size: int) -> np.ndarray:
    M = np.empty((size, size), dtype=object)
    for i in range(size):
        for j in range(size):
            M[i, j] = Cyclotomic.one(r) if i == j else Cyclotomic.zero(r)
    return M


def cyc_matrix(r: int, rows) -> np.ndarray:
    """Lift a nested list of rationals / Cyclotomic values to an object array."""
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = x if isinstance(x, Cyclotomic) else Cyclotomic(r, [Fraction(x)])
    return out


def cyc_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    n, k = X.shape
    k2, m = Y.shape
    if k != k2:
        raise ValueError(f"shape mismatch {X.shape} @ {Y.shape}")
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            acc = None
            for t in range(k):
                if X[i, t] and Y[t, j]:
                    term = X[i, t] * Y[t, j]
                    acc = term if acc is None else acc + term
            out[i, j] = acc if acc is not None else X[i, 0] * 0
    return out


def cyc_inv(M: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse over Q(zeta_r)."""
    n = M.shape[0]
    r = M[0, 0].r
    aug = np.concatenate([M.copy(), cyc_identity(r, n)], axis=1)
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i, col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[[col, piv]] = aug[[piv, col]]
        p = aug[col, col].inverse()
        aug[col] = [x * p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i, col]:
                f = aug[i, col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return aug[:, n:]


def cyc_power(M: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        return cyc_power(cyc_inv(M), -k)
    out = cyc_identity(M[0, 0].r, M.shape[0])
    base = M
    while k:
        if k & 1:
            out = cyc_matmul(out, base)
        base = cyc_matmul(base, base)
        k >>= 1
    return out


def cyc_kron(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    a, b = X.shape
    c, d = Y.shape
    out = np.empty((a * c, b * d), dtype=object)
    for i in range(a):
        for j in range(b):
            for k in range(c):
                for m in range(d):
                    out[i * c + k, j * d + m] = X[i, j] * Y[k, m]
    return out


def cyc_block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    r = blocks[0][0, 0].r
    size = sum(b.shape[0] for b in blocks)
    out = np.empty((size, size), dtype=object)
    out[:, :] = Cyclotomic.zero(r)
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def cyc_equal(X: np.ndarray, Y: np.ndarray) -> bool:
    return X.shape == Y.shape and all(a == b for a, b in zip(X.flat, Y.flat))


def cyc_det_nonzero(M: np.ndarray) -> bool:
    try:
        cyc_inv(M)
    except ZeroDivisionError:
        return False
    return True


# -- the set itself ---------------------------------------------------------

@dataclass(eq=False)
class CocycleSet:
    rank: int
    V: List[np.ndarray]
    U: List[np.ndarray]
    r: Optional[int] = None

    def __post_init__(self):
        if len(self.V) != len(self.U):
            raise ValueError("V and U must have the same length n")
        for M in list(self.V) + list(self.U):
            if M.shape != (self.rank, self.rank):
                raise ValueError(f"matrix of shape {M.shape} in a rank-{self.rank} set")
        if self.r is None:
            self.r = self.V[0][0, 0].r if self.V else self.rank

    @property
    def n(self) -> int:
        return len(self.V)

    def numeric(self):
        to_c = np.vectorize(complex, otypes=[complex])
        return [to_c(M) for M in self.V], [to_c(M) for M in self.U]

    def conjugate_by(self, S: np.ndarray) -> CocycleSet:
        Si = cyc_inv(S)
        f = lambda M: cyc_matmul(cyc_matmul(S, M), Si)  # noqa: E731
        return CocycleSet(self.rank, [f(M) for M in self.V], [f(M) for M in self.U], self.r)

    def to_json(self):
        enc = lambda M: [[x.to_json() for x in row] for row in M]  # noqa: E731
        return {"rank": self.rank, "r": self.r,
                "V": [enc(M) for M in self.V], "U": [enc(M) for M in self.U]}

    @classmethod
    def from_json(cls, obj, r: Optional[int] = None) -> CocycleSet:
        rank = int(obj["rank"])
        r = int(r if r is not None else obj.get("r", rank))

        def dec(M):
            arr = np.empty((len(M), len(M[0]) if M else 0), dtype=object)
            for i, row in enumerate(M):
                if len(row) != arr.shape[1]:
                    raise ValueError("ragged matrix in cocycle JSON")
                for j, x in enumerate(row):
                    arr[i, j] = Cyclotomic.from_json(r, x if isinstance(x, list) else [x])
            return arr

        return cls(rank, [dec(M) for M in obj["V"]], [dec(M) for M in obj["U"]], r)


@dataclass
class CocycleReport:
    valid: bool
    violations: List[dict] = field(default_factory=list)

    def to_json(self):
        return {"valid": self.valid, "violations": self.violations}


def _int_matrix(A) -> np.ndarray:
    A = np.array(A, dtype=object)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be a square integer matrix")
    out = np.empty(A.shape, dtype=object)
    for idx, a in np.ndenumerate(A):
        if int(a) != a:
            raise ValueError(f"non-integer entry {a} in A")
        out[idx] = int(a)
    return out


def verify_cocycle(cset: CocycleSet, r: int, A, omega_power: int = 1) -> CocycleReport:
    """Check the three relation families exactly; report every failing (j, k, relation).

    ``omega_power`` selects ``w = zeta_r**omega_power``; the default is the
    primitive root.
    """
    if cset.rank != r:
        raise ValueError(f"set rank {cset.rank} differs from r={r}")
    return check_relations(cset, r, A, omega_power)


def check_relations(cset: CocycleSet, r: int, A, omega_power: int = 1) -> CocycleReport:
    """The relations of :func:`verify_cocycle` at any matrix size."""
    A = _int_matrix(A)
    n = A.shape[0]
    if cset.n != n:
        raise ValueError(f"set has {cset.n} pairs but A is {n}x{n}")
    for M in cset.V + cset.U:
        if any(x.r != r for x in M.flat):
            raise ValueError("matrix entries are not over Q(zeta_r)")
    V, U = cset.V, cset.U
    bad = []
    for j in range(n):
        for k in range(j + 1, n):
            if not cyc_equal(cyc_matmul(V[j], V[k]), cyc_matmul(V[k], V[j])):
                bad.append({"j": j + 1, "k": k + 1, "relation": "VV"})
            if not cyc_equal(cyc_matmul(U[j], U[k]), cyc_matmul(U[k], U[j])):
                bad.append({"j": j + 1, "k": k + 1, "relation": "UU"})
    for j in range(n):
        for k in range(n):
            w = Cyclotomic.zeta(r, -omega_power * int(A[k, j]))
            lhs = cyc_matmul(U[k], V[j])
            lhs = np.vectorize(lambda x: w * x, otypes=[object])(lhs)
            if not cyc_equal(lhs, cyc_matmul(V[j], U[k])):
                bad.append({"j": j + 1, "k": k + 1, "relation": "wUV=VU"})
    for name, mats in (("V", V), ("U", U)):
        for i, M in enumerate(mats):
            if not cyc_det_nonzero(M):
                bad.append({"j": i + 1, "k": None, "relation": f"{name} invertible"})
    return CocycleReport(not bad, bad)


# -- Smith normal form ------------------------------------------------------

def smith_normal_form(A) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unimodular P, Q and diagonal D with ``P A Q = D`` and ``d_1 | d_2 | ...``.

    Diagonal entries are non-negative.  Works on any rectangular integer
    matrix; arrays are object dtype so entries never overflow.
    """
    D = np.array(A, dtype=object)
    if D.ndim != 2:
        raise ValueError("A must be a matrix")
    D = np.vectorize(int, otypes=[object])(D) if D.size else D
    m, n = D.shape
    P = np.identity(m, dtype=int).astype(object)
    Q = np.identity(n, dtype=int).astype(object)

    def swap_rows(i, j):
        D[[i, j]] = D[[j, i]]
        P[[i, j]] = P[[j, i]]

    def swap_cols(i, j):
        D[:, [i, j]] = D[:, [j, i]]
        Q[:, [i, j]] = Q[:, [j, i]]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i, j]), i, j) for i in range(t, m) for j in range(t, n) if D[i, j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                q = D[i, t] // D[t, t]
                if q:
                    D[i] = D[i] - q * D[t]
                    P[i] = P[i] - q * P[t]
                if D[i, t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t, j] // D[t, t]
                if q:
                    D[:, j] = D[:, j] - q * D[:, t]
                    Q[:, j] = Q[:, j] - q * Q[:, t]
                if D[t, j]:
                    done = False
            if done:
                # divisibility: fold a non-divisible entry into row t and retry
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if D[i, j] % D[t, t]), None)
                if bad is None:
                    break
                D[t] = D[t] + D[bad[0]]
                P[t] = P[t] + P[bad[0]]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(D[i, t]), i, t) for i in range(t, m) if D[i, t]] + \
                    [(abs(D[t, j]), t, j) for j in range(t, n) if D[t, j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
        if D[t, t] < 0:
            D[t] = -D[t]
            P[t] = -P[t]
        t += 1
    return P, D, Q


def elementary_divisors(A) -> List[int]:
    _, D, _ = smith_normal_form(_int_matrix(A))
    return [int(D[i, i]) for i in range(min(D.shape))]


def minimal_dimension(r: int, A) -> int:
    """Smallest rank of a valid set for ``(r, A)``: product of ``r / gcd(d_i, r)``.

    A valid set of rank ``N`` exists iff this number divides ``N``.  This is
    derived (finite Heisenberg representation theory) and backed by the
    brute-force oracle, not quoted from the source.
    """
    if r < 1:
        raise ValueError("r must be positive")
    m = 1
    for d in elementary_divisors(A):
        m *= r // math.gcd(d, r)
    return m


# -- clock and shift construction ------------------------------------------

def shift_matrix(r: int, k: int) -> np.ndarray:
    """k x k cyclic shift ``e_i -> e_{i+1}``."""
    M = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            M[i, j] = Cyclotomic.one(r) if i == (j + 1) % k else Cyclotomic.zero(r)
    return M


def clock_matrix(r: int, k: int, d: int) -> np.ndarray:
    """``diag(1, z^d, z^(2d), ...)`` with ``z = zeta_r``."""
    M = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            M[i, j] = Cyclotomic.zeta(r, d * i) if i == j else Cyclotomic.zero(r)
    return M


def _int_inverse(M: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular integer matrix, as integers."""
    n = M.shape[0]
    aug = np.concatenate([np.vectorize(Fraction, otypes=[object])(M),
                          np.identity(n, dtype=int).astype(object)], axis=1)
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i, col] != 0)
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] / aug[col, col]
        for i in range(n):
            if i != col and aug[i, col] != 0:
                aug[i] = aug[i] - aug[i, col] * aug[col]
    inv = aug[:, n:]
    assert all(x.denominator == 1 for x in inv.flat), "matrix is not unimodular"
    return np.vectorize(int, otypes=[object])(inv)


def construct_standard(r: int, A, rank: Optional[int] = None):
    """Explicit valid set of rank ``r`` (or ``rank``), else :class:`NoSolution`.

    With ``P A Q = D``, take commuting clock/shift pairs ``(S_i, C_i)`` with
    ``S_i C_l = z^(-d_i delta_il) C_l S_i`` and set
    ``V_j = prod_i S_i^(Q^-1)_ij``, ``U_k = prod_l C_l^(P^-t)_lk``;
    the commutator phase is then ``z^-(P^-1 D Q^-1)_kj = z^-a_kj``.
    """
    A = _int_matrix(A)
    rank = r if rank is None else rank
    n = A.shape[0]
    m = minimal_dimension(r, A)
    if rank % m:
        return NoSolution(r, m, f"minimal dimension {m} does not divide rank {rank}")
    P, D, Q = smith_normal_form(A)
    d = [int(D[i, i]) for i in range(n)]
    ks = [r // math.gcd(di, r) for di in d]

    def embed(i, block):
        out = cyc_identity(r, 1)
        for t in range(n):
            out = cyc_kron(out, block if t == i else cyc_identity(r, ks[t]))
        return out

    S = [embed(i, shift_matrix(r, ks[i])) for i in range(n)]
    C = [embed(i, clock_matrix(r, ks[i], d[i])) for i in range(n)]
    Qi = _int_inverse(Q)
    Pit = _int_inverse(P).T

    def combine(base, exps):
        out = cyc_identity(r, m)
        for M, e in zip(base, exps):
            e = int(e) % r if r > 0 else int(e)
            out = cyc_matmul(out, cyc_power(M, e))
        return out

    V = [combine(S, Qi[:, j]) for j in range(n)]
    U = [combine(C, Pit[:, k]) for k in range(n)]
    copies = rank // m
    if copies > 1:
        V = [cyc_block_diag([M] * copies) for M in V]
        U = [cyc_block_diag([M] * copies) for M in U]
    return CocycleSet(rank, V, U, r)


# -- exhaustive search over monomial matrices -------------------------------
# A monomial matrix is (perm, exps): column i has z^exps[i] in row perm[i].

Mono = Tuple[Tuple[int, ...], Tuple[int, ...]]


def _mono_mul(a: Mono, b: Mono, r: int) -> Mono:
    p, e = a
    q, f = b
    return tuple(p[q[i]] for i in range(len(q))), tuple((f[i] + e[q[i]]) % r for i in range(len(q)))


def _mono_inv(a: Mono, r: int) -> Mono:
    p, e = a
    size = len(p)
    pi = [0] * size
    ei = [0] * size
    for i in range(size):
        pi[p[i]] = i
        ei[p[i]] = (-e[i]) % r
    return tuple(pi), tuple(ei)


def _mono_to_matrix(a: Mono, r: int) -> np.ndarray:
    p, e = a
    size = len(p)
    M = np.empty((size, size), dtype=object)
    M[:, :] = Cyclotomic.zero(r)
    for i in range(size):
        M[p[i], i] = Cyclotomic.zeta(r, e[i])
    return M


def _monomial_group(r: int, rank: int) -> List[Mono]:
    return [(p, e) for p in itertools.permutations(range(rank))
            for e in itertools.product(range(r), repeat=rank)]


class _Group:
    """The monomial group as integer arrays, for vectorized products."""

    def __init__(self, r: int, rank: int):
        self.r, self.rank = r, rank
        self.elems = _monomial_group(r, rank)
        N = len(self.elems)
        self.P = np.array([e[0] for e in self.elems], dtype=np.int64).reshape(N, rank)
        self.E = np.array([e[1] for e in self.elems], dtype=np.int64).reshape(N, rank)
        self._w = (rank ** np.arange(rank), r ** np.arange(rank))
        self.lookup = np.full(rank ** rank * r ** rank, -1, dtype=np.int64)
        self.lookup[self.codes(self.P, self.E)] = np.arange(N)
        inv = [_mono_inv(x, r) for x in self.elems]
        self.Pinv = np.array([x[0] for x in inv], dtype=np.int64).reshape(N, rank)
        self.Einv = np.array([x[1] for x in inv], dtype=np.int64).reshape(N, rank)
        self._phase = {}

    def codes(self, P, E):
        return (P @ self._w[0]) * self.r ** self.rank + E @ self._w[1]

    def compose(self, Pa, Ea, Pb, Eb):
        """Row-wise products a*b."""
        return np.take_along_axis(Pa, Pb, axis=1), (Eb + np.take_along_axis(Ea, Pb, axis=1)) % self.r

    def left(self, x):
        """x*g for every g."""
        p, e = self.P[x], self.E[x]
        return p[self.P], (self.E + e[self.P]) % self.r

    def right(self, x):
        """g*x for every g."""
        return self.P[:, self.P[x]], (self.E[x] + self.E[:, self.P[x]]) % self.r

    def phase(self, x):
        """s with x*g == w^s g*x for each g, or -1 when the products differ beyond a scalar."""
        got = self._phase.get(x)
        if got is None:
            (p1, e1), (p2, e2) = self.left(x), self.right(x)
            d = (e1 - e2) % self.r
            got = np.where(np.all(p1 == p2, axis=1) & np.all(d == d[:, :1], axis=1), d[:, 0], -1)
            self._phase[x] = got
        return got

    def conjugates(self, x, among):
        """Indices of g x g^-1 for g in ``among``."""
        gp, ge = self.right(x)
        cp, ce = self.compose(gp[among], ge[among], self.Pinv[among], self.Einv[among])
        return self.lookup[self.codes(cp, ce)]

    def orbit_representatives(self, cands, acting):
        """First candidate (in order) of each orbit under conjugation by ``acting``."""
        seen = np.zeros(len(self.elems), dtype=bool)
        reps = []
        for c in cands:
            if not seen[c]:
                reps.append(int(c))
                seen[self.conjugates(c, acting)] = True
        return reps


@lru_cache(maxsize=8)
def _group(r: int, rank: int) -> _Group:
    return _Group(r, rank)


def brute_force_search(r: int, A, rank: Optional[int] = None, *, max_rank: int = 4,
                       max_n: int = 2, reduce_symmetry: bool = True):
    """Exhaustive search over monomial matrices with ``zeta_r``-power entries.

    Matrices are assigned in the order V_1, U_1, V_2, U_2, ... and each is
    filtered against every relation with those already chosen.  With
    ``reduce_symmetry`` the next matrix only ranges over orbit
    representatives under conjugation by the monomial matrices commuting
    with everything chosen so far.  That is sound: such a conjugation fixes
    the chosen prefix and maps solutions to solutions.  Returns the first
    set found in that order, verified exactly, or :class:`Exhausted`.
    """
    A = _int_matrix(A)
    rank = r if rank is None else rank
    n = A.shape[0]
    if rank > max_rank or n > max_n:
        raise GuardError(f"search limited to rank <= {max_rank}, n <= {max_n}")
    if rank < 1 or r < 1:
        raise ValueError("r and rank must be positive")
    G = _group(r, rank)
    N = len(G.elems)
    nodes = 0

    def mask(x, shift=0):
        # rows g with x*g == w^shift g*x
        return G.phase(x) == shift % r

    def search(V: list, U: list):
        nonlocal nodes
        nodes += 1
        if len(U) == n:
            return V, U
        centralizer = np.ones(N, dtype=bool)
        for x in V + U:
            centralizer &= mask(x)
        ok = np.ones(N, dtype=bool)
        if len(V) == len(U):
            j = len(V)
            for v in V:
                ok &= mask(v)
            for k, u in enumerate(U):
                # cand U_k == w^-a U_k cand, i.e. U_k cand == w^a cand U_k
                ok &= mask(u, int(A[k, j]))
        else:
            k = len(U)
            for u in U:
                ok &= mask(u)
            for j, v in enumerate(V):
                # V_j cand == w^-a cand V_j
                ok &= mask(v, -int(A[k, j]))
        cands = np.flatnonzero(ok)
        if reduce_symmetry:
            cands = G.orbit_representatives(cands, np.flatnonzero(centralizer))
        for c in cands:
            nxt = (V + [int(c)], U) if len(V) == len(U) else (V, U + [int(c)])
            found = search(*nxt)
            if found:
                return found
        return None

    found = search([], [])
    if found is None:
        return Exhausted(r, rank, N, nodes)
    V, U = found
    cset = CocycleSet(rank, [_mono_to_matrix(G.elems[v], r) for v in V],
                      [_mono_to_matrix(G.elems[u], r) for u in U], r)
    report = check_relations(cset, r, A)
    assert report.valid, report.violations
    return cset

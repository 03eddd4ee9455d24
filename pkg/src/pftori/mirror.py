"""Symplectic side: the B-field, affine Lagrangian graphs and their intersections.

A holomorphic bundle E_(r,A,mu,U) with mu = p + T^t q corresponds to the
graph ``y = (1/r) A x + (1/r) p`` in the torus with complexified symplectic
form ``-dx^t (T^-1)^t dy``.  For two such graphs the intersection on the
covering space is the solution set of ``alpha x = beta`` with

    alpha = A/r - B/s,    beta = u/s - p/r.

Offsets are real numbers of the form ``a + b*pi`` with rational a, b (so the
lattice ``2 pi Z^n`` is representable); internally each vector is kept as
its rational part and its pi-coefficient.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import linalg as la
from .bundle import BundleData, mu_split
from .scalars import QI, PiLinear, format_scalar, parse_scalar
from .torus import TorusData

FLOAT_RANK_TOL = 1e-9


# -- real pi-linear vectors -----------------------------------------------------

def split_real(x) -> Tuple[Fraction, Fraction]:
    """(a, b) with x = a + b*pi; rejects non-real and floating input."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    if isinstance(x, QI):
        if x.im != 0:
            raise ValueError(f"{x} is not real")
        return x.re, Fraction(0)
    if isinstance(x, PiLinear):
        if not x.is_real():
            raise ValueError(f"{x} is not real")
        return x.const.re, x.coef.re
    raise ValueError(f"exact mode needs rational or rational + rational*pi entries, got {x!r}")


def join_real(a: Fraction, b: Fraction):
    return a if b == 0 else PiLinear(a, b)


@dataclass(frozen=True, eq=False)
class PiVector:
    """Real vector ``rational + pi * pi_part``."""

    rational: Tuple[Fraction, ...]
    pi_part: Tuple[Fraction, ...]

    @classmethod
    def of(cls, entries) -> PiVector:
        pairs = [split_real(x) for x in entries]
        return cls(tuple(a for a, _ in pairs), tuple(b for _, b in pairs))

    @classmethod
    def zeros(cls, n: int) -> PiVector:
        return cls((Fraction(0),) * n, (Fraction(0),) * n)

    def __len__(self):
        return len(self.rational)

    def __add__(self, other: PiVector) -> PiVector:
        return PiVector(tuple(a + b for a, b in zip(self.rational, other.rational)),
                        tuple(a + b for a, b in zip(self.pi_part, other.pi_part)))

    def scale(self, c) -> PiVector:
        c = Fraction(c)
        return PiVector(tuple(c * a for a in self.rational), tuple(c * a for a in self.pi_part))

    def __sub__(self, other: PiVector) -> PiVector:
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not any(self.rational) and not any(self.pi_part)

    def in_two_pi_lattice(self) -> bool:
        """Every entry in 2 pi Z."""
        return not any(self.rational) and all(b.denominator == 1 and b.numerator % 2 == 0
                                              for b in self.pi_part)

    def entries(self):
        return [join_real(a, b) for a, b in zip(self.rational, self.pi_part)]

    def numeric(self) -> np.ndarray:
        return np.array([float(a) + math.pi * float(b) for a, b in zip(self.rational, self.pi_part)])

    def to_json(self):
        return [format_scalar(x) for x in self.entries()]


def _frac_matrix(M) -> np.ndarray:
    M = np.array(M, dtype=object)
    out = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        a, b = split_real(x)
        if b:
            raise ValueError("matrix entries must be rational")
        out[idx] = a
    return out


# -- symplectic data -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymplecticData:
    omega: np.ndarray
    Bfield: np.ndarray

    def to_json(self):
        enc = lambda M: [[format_scalar(x) for x in row] for row in M]  # noqa: E731
        return {"omega": enc(self.omega), "B": enc(self.Bfield)}


def symplectic_data(torus: TorusData) -> SymplecticData:
    """omega = Im(T^-1)^t, B = Re(T^-1)^t; asserts B + i omega = (T^-1)^t."""
    T = torus.T if torus.exact else torus.numeric()
    Tinv_t = la.inv(T).T
    omega, B = la.imag_part(Tinv_t), la.real_part(Tinv_t)
    i = QI(0, 1) if torus.exact else 1j
    recon = B + i * omega - Tinv_t
    if not la.all_zero(recon, None if torus.exact else 1e-12 * max(1.0, la.max_abs(Tinv_t))):
        raise AssertionError("B + i omega differs from (T^-1)^t")
    return SymplecticData(omega, B)


@dataclass(frozen=True)
class LagrangianReport:
    lagrangian: bool
    flat_system: bool
    at_symmetric: bool

    @property
    def equivalent_to_AT_symmetric(self) -> bool:
        return (self.lagrangian and self.flat_system) == self.at_symmetric

    def to_json(self):
        return {"lagrangian": self.lagrangian, "flat_system": self.flat_system,
                "at_symmetric": self.at_symmetric,
                "equivalent_to_AT_symmetric": self.equivalent_to_AT_symmetric}


def lagrangian_check(A, torus: TorusData) -> LagrangianReport:
    """omega A symmetric (Lagrangian graph), B A symmetric (flat local system), AT symmetric."""
    sd = symplectic_data(torus)
    exact = torus.exact
    A = la.exact_array(np.asarray(A, dtype=object).tolist()) if exact else np.asarray(A, dtype=complex)
    T = torus.T if exact else torus.numeric()
    tol = None if exact else 1e-12 * max(1.0, la.max_abs(T), la.max_abs(A))
    wa, ba = sd.omega @ A, sd.Bfield @ A
    return LagrangianReport(la.is_symmetric(wa, tol), la.is_symmetric(ba, tol),
                            la.is_symmetric(A @ T, tol))


# -- affine Lagrangians -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AffineLagrangian:
    """The graph y = (1/r) A x + (1/r) p with local-system holonomy q."""

    r: int
    A: np.ndarray
    p: tuple
    q: tuple = ()

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValueError("r must be a positive integer")
        A = np.array(self.A, dtype=object)
        if A.ndim == 0:
            A = A.reshape(1, 1)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or any(int(a) != a for a in A.flat):
            raise ValueError("A must be a square integer matrix")
        object.__setattr__(self, "A", np.vectorize(int, otypes=[object])(A))
        n = A.shape[0]
        p = tuple(self.p)
        q = tuple(self.q) if self.q else (Fraction(0),) * n
        if len(p) != n or len(q) != n:
            raise ValueError(f"p and q must have length {n}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def exact(self) -> bool:
        try:
            PiVector.of(self.p)
        except (ValueError, TypeError):
            return False
        return True

    @classmethod
    def from_bundle(cls, bundle: BundleData, torus: TorusData) -> AffineLagrangian:
        p, q = mu_split(bundle.mu, torus)
        return cls(bundle.r, bundle.A, tuple(p), tuple(q))

    def to_json(self):
        return {"r": self.r, "A": [[int(a) for a in row] for row in self.A],
                "p": [format_scalar(x) for x in self.p], "q": [format_scalar(x) for x in self.q]}

    @classmethod
    def from_json(cls, obj) -> AffineLagrangian:
        A = [[int(a) for a in row] for row in obj["A"]]
        n = len(A)
        parse = lambda xs: tuple(_real(parse_scalar(x)) for x in xs)  # noqa: E731
        return cls(int(obj["r"]), A, parse(obj.get("p", [0] * n)), parse(obj.get("q", [0] * n)))


def _real(x):
    if isinstance(x, QI) and x.im == 0:
        return x.re
    if isinstance(x, complex):
        if x.imag:
            raise ValueError("Lagrangian offsets must be real")
        return x.real
    return x


def alpha_beta(L1: AffineLagrangian, L2: AffineLagrangian):
    """alpha = A/r - B/s (rational matrix), beta = u/s - p/r (:class:`PiVector`).

    Floating offsets give a float pair instead (non-authoritative mode).
    """
    if L1.n != L2.n:
        raise ValueError("Lagrangians live in different dimensions")
    r, s = L1.r, L2.r
    alpha = np.vectorize(lambda a: Fraction(a), otypes=[object])(L1.A) / r - \
        np.vectorize(lambda a: Fraction(a), otypes=[object])(L2.A) / s
    if L1.exact and L2.exact:
        beta = PiVector.of(L2.p).scale(Fraction(1, s)) - PiVector.of(L1.p).scale(Fraction(1, r))
        return alpha, beta
    p = np.array([complex(x).real for x in L1.p])
    u = np.array([complex(x).real for x in L2.p])
    return alpha.astype(float), u / s - p / r


# -- intersections ------------------------------------------------------------------

def minors_vanish(alpha) -> bool:
    """All 2x2 minors vanish; asserted equal to ``rank(alpha) <= 1``."""
    M = _frac_matrix(alpha)
    rows, cols = M.shape
    vanish = all(M[i, k] * M[j, l] - M[i, l] * M[j, k] == 0
                 for i, j in itertools.combinations(range(rows), 2)
                 for k, l in itertools.combinations(range(cols), 2))
    if vanish != (la.rank(M) <= 1):
        raise AssertionError("2x2 minors and rank disagree")
    return vanish


@dataclass
class IntersectionResult:
    status: str                     # "codim" or "empty"
    codim: Optional[int]
    alpha_rank: int
    minors_vanish: bool
    mode: str = "covering"
    witness: Optional[dict] = None
    authoritative: bool = True
    shift: Optional[dict] = None
    shifts_tried: int = 0

    @property
    def empty(self) -> bool:
        return self.status == "empty"

    def to_json(self):
        out = {"status": self.status, "codim": self.codim, "alpha_rank": self.alpha_rank,
               "minors_vanish": self.minors_vanish, "mode": self.mode,
               "authoritative": self.authoritative, "witness": self.witness}
        if self.mode == "torus":
            out["shift"] = self.shift
            out["shifts_tried"] = self.shifts_tried
        return out


def _solve(alpha: np.ndarray, beta: PiVector):
    """General solution of alpha x = beta over R, or None when inconsistent.

    Since pi is transcendental and alpha rational, a real solution exists
    iff both the rational part and the pi-part of beta lie in the column
    space of alpha.
    """
    n_rows, n_cols = alpha.shape
    aug = np.empty((n_rows, n_cols + 2), dtype=object)
    aug[:, :n_cols] = alpha
    aug[:, n_cols] = list(beta.rational)
    aug[:, n_cols + 1] = list(beta.pi_part)
    R, piv = la.rref(aug)
    if any(c >= n_cols for c in piv):
        return None
    free = [c for c in range(n_cols) if c not in piv]
    part_r = [Fraction(0)] * n_cols
    part_p = [Fraction(0)] * n_cols
    for row, c in enumerate(piv):
        part_r[c] = R[row, n_cols]
        part_p[c] = R[row, n_cols + 1]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, c in enumerate(piv):
            v[c] = -R[row, f]
        basis.append(v)
    return piv, free, PiVector(tuple(part_r), tuple(part_p)), basis


def _pivot_row_witness(alpha, beta: PiVector):
    """The first nonzero alpha_ij (lexicographic) and the row it solves for x_j."""
    rows, cols = alpha.shape
    i, j = next((i, j) for i in range(rows) for j in range(cols) if alpha[i, j] != 0)
    a = alpha[i, j]
    coeffs = {str(k + 1): str(-alpha[i, k] / a) for k in range(cols) if k != j and alpha[i, k] != 0}
    const = join_real(beta.rational[i] / a, beta.pi_part[i] / a)
    return {"pivot": [i + 1, j + 1], "x_j": {"coefficients": coeffs, "constant": format_scalar(const)}}


def check_witness(alpha, beta: PiVector, witness: dict) -> bool:
    """Substitute the parametrized solution back: alpha (x0 + sum t_i v_i) = beta identically."""
    x0 = PiVector.of([_real(parse_scalar(x)) if isinstance(x, (str, dict)) else x
                      for x in witness["particular"]])
    A = _frac_matrix(alpha)
    img_r = A @ np.array(x0.rational, dtype=object)
    img_p = A @ np.array(x0.pi_part, dtype=object)
    if list(img_r) != list(beta.rational) or list(img_p) != list(beta.pi_part):
        return False
    for v in witness["null_basis"]:
        if any(x != 0 for x in A @ np.array([Fraction(t) for t in v], dtype=object)):
            return False
    return True


def _lattice_shifts(L1: AffineLagrangian, L2: AffineLagrangian, K: int):
    """Offsets (2pi/s) B k' - (2pi/r) A k + 2pi m for entries in [-K, K], small ones first."""
    n = L1.n
    rng = sorted(range(-K, K + 1), key=lambda v: (abs(v), v))
    Af = np.vectorize(Fraction, otypes=[object])(L1.A)
    Bf = np.vectorize(Fraction, otypes=[object])(L2.A)
    for k in itertools.product(rng, repeat=n):
        ak = Af @ np.array(k, dtype=object) / L1.r
        for kp in itertools.product(rng, repeat=n):
            bk = Bf @ np.array(kp, dtype=object) / L2.r
            for m in itertools.product(rng, repeat=n):
                pi_part = tuple(2 * (bk[i] - ak[i] + m[i]) for i in range(n))
                yield {"k": list(k), "k_prime": list(kp), "m": list(m)}, \
                    PiVector((Fraction(0),) * n, pi_part)


def intersection_codim(alpha, beta, mode: str = "covering", *, L1: Optional[AffineLagrangian] = None,
                       L2: Optional[AffineLagrangian] = None, K: Optional[int] = None,
                       max_shifts: int = 200_000) -> IntersectionResult:
    """Codimension of the intersection of two affine Lagrangian graphs.

    ``covering`` solves alpha x = beta on the universal cover.  ``torus`` also
    tries beta shifted by lattice translates of the two multi-sections (needs
    the Lagrangians; search box [-K, K] with K = r*s by default).  Float
    inputs are decided with a singular-value tolerance and marked
    non-authoritative.
    """
    if mode not in ("covering", "torus"):
        raise ValueError(f"unknown mode {mode!r}")
    if not isinstance(beta, PiVector):
        return _intersection_float(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float), mode)
    alpha = _frac_matrix(alpha)
    rank = la.rank(alpha)
    mv = minors_vanish(alpha)
    if rank == 0:
        if beta.in_two_pi_lattice():
            return IntersectionResult("codim", 0, 0, mv, mode,
                                      witness={"particular": [], "null_basis": [], "all_of_L": True})
        if mode == "covering":
            return IntersectionResult("empty", None, 0, mv, mode)
    sol = _solve(alpha, beta) if rank else None
    if sol is not None:
        piv, free, x0, basis = sol
        witness = {"pivot_columns": [c + 1 for c in piv], "free_columns": [c + 1 for c in free],
                   "particular": x0.to_json(), "null_basis": [[str(t) for t in v] for v in basis]}
        witness.update(_pivot_row_witness(alpha, beta))
        return IntersectionResult("codim", rank, rank, mv, mode, witness=witness)
    if mode == "covering":
        return IntersectionResult("empty", None, rank, mv, mode)
    if L1 is None or L2 is None:
        raise ValueError("torus mode needs both Lagrangians")
    K = L1.r * L2.r if K is None else K
    tried = 0
    for shift, offset in _lattice_shifts(L1, L2, K):
        tried += 1
        if tried > max_shifts:
            raise ValueError(f"torus-mode search exceeds {max_shifts} shifts; lower K")
        b2 = beta + offset
        if rank == 0:
            ok = b2.in_two_pi_lattice()
            sol2 = None
        else:
            sol2 = _solve(alpha, b2)
            ok = sol2 is not None
        if ok:
            witness = None
            if sol2 is not None:
                piv, free, x0, basis = sol2
                witness = {"pivot_columns": [c + 1 for c in piv], "free_columns": [c + 1 for c in free],
                           "particular": x0.to_json(), "null_basis": [[str(t) for t in v] for v in basis]}
            return IntersectionResult("codim", rank, rank, mv, mode, witness=witness, shift=shift,
                                      shifts_tried=tried)
    return IntersectionResult("empty", None, rank, mv, mode, shifts_tried=tried)


def _intersection_float(alpha: np.ndarray, beta: np.ndarray, mode: str) -> IntersectionResult:
    if mode != "covering":
        raise ValueError("torus mode needs exact data")
    rank = la.rank(alpha, FLOAT_RANK_TOL)
    s = np.linalg.svd(alpha, compute_uv=False) if alpha.size else np.array([])
    mv = int(np.sum(s > FLOAT_RANK_TOL)) <= 1
    if rank == 0:
        k = beta / (2 * math.pi)
        in_lattice = bool(np.allclose(k, np.round(k), atol=FLOAT_RANK_TOL))
        return IntersectionResult("codim" if in_lattice else "empty", 0 if in_lattice else None, 0, mv,
                                  mode, authoritative=False)
    aug_rank = la.rank(np.column_stack([alpha, beta]), FLOAT_RANK_TOL)
    if aug_rank > rank:
        return IntersectionResult("empty", None, rank, mv, mode, authoritative=False)
    return IntersectionResult("codim", rank, rank, mv, mode, authoritative=False)


# -- the codimension statement --------------------------------------------------------

@dataclass
class CodimCheck:
    cone_pf_possible: bool
    result: IntersectionResult
    bound_holds: bool
    outside_hypothesis: bool
    lagrangians_ok: bool = True
    notes: List[str] = field(default_factory=list)

    def to_json(self):
        return {"cone_pf_possible": self.cone_pf_possible, "codim": self.result.to_json(),
                "bound_holds": self.bound_holds,
                "outside_hypothesis": self.outside_hypothesis, "notes": list(self.notes)}


def codim_bound_check(L1: AffineLagrangian, L2: AffineLagrangian, torus: Optional[TorusData] = None,
                      mode: str = "covering") -> CodimCheck:
    """When the cone can be projectively flat (all 2x2 minors of alpha vanish)
    the intersection has codimension at most one.

    Inputs whose minors vanish but whose system is inconsistent are flagged
    ``outside_hypothesis``: nonemptiness there rests on a mirror-symmetry
    argument this package does not reproduce.
    """
    notes = []
    if torus is not None:
        for name, L in (("first", L1), ("second", L2)):
            rep = lagrangian_check(L.A, torus)
            if not (rep.lagrangian and rep.flat_system):
                raise ValueError(f"{name} graph is not an object (omega A or B A not symmetric)")
    alpha, beta = alpha_beta(L1, L2)
    res = intersection_codim(alpha, beta, mode, L1=L1, L2=L2)
    possible = res.minors_vanish
    satisfied = (not possible) or res.empty or (res.codim is not None and res.codim <= 1)
    outside = possible and res.empty
    if outside:
        notes.append("minors vanish but alpha x = beta is inconsistent: outside the hypothesis "
                     "(nonemptiness is assumed via mirror symmetry, not derived)")
    return CodimCheck(possible, res, satisfied, outside, True, notes)

"""Bundle data E_(r,A,mu,U): holomorphicity, curvature, the matrix R and its pairing.

Values that are rational multiples of pi are stored as their pi-coefficient:
``PairingForm.R_over_pi`` holds ``pi * R`` so that ``R = R_over_pi / pi``,
and lattice pairings are reported as ``R(gamma, gamma') / pi``.  On exact
torus data all of these are Gaussian rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg as la
from .exterior import FormElement, two_form_from_matrix
from .scalars import QI, format_scalar, parse_scalar
from .torus import LatticeVector, TorusData, lattice_coeff

I = QI(0, 1)


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BundleData:
    r: int
    A: np.ndarray
    mu: np.ndarray = None
    cocycle: Optional[object] = None

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValueError("rank r must be a positive integer")
        A = np.array(self.A, dtype=object)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A must be a square integer matrix")
        if any(int(a) != a for a in A.flat):
            raise ValueError("A must have integer entries")
        A = np.array([[int(a) for a in row] for row in A], dtype=object)
        object.__setattr__(self, "A", A)
        n = A.shape[0]
        mu = np.array([QI(0)] * n, dtype=object) if self.mu is None else np.asarray(self.mu)
        if mu.shape != (n,):
            raise ValueError(f"mu must have length {n}")
        object.__setattr__(self, "mu", mu)
        if self.cocycle is not None and self.cocycle.rank != self.r:
            raise ValueError("cocycle rank differs from r")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def column(self, j: int):
        """a_j = (a_1j, ..., a_nj), 0-based j."""
        return self.A[:, j]

    def to_json(self):
        out = {
            "r": self.r,
            "A": [[int(a) for a in row] for row in self.A],
            "mu": {"re": [format_scalar(x.real) for x in self.mu],
                   "im": [format_scalar(x.imag) for x in self.mu]},
        }
        if self.cocycle is not None:
            out["cocycle"] = self.cocycle.to_json()
        return out

    @classmethod
    def from_json(cls, obj, torus: Optional[TorusData] = None) -> BundleData:
        from .heisenberg import CocycleSet

        r = int(obj["r"])
        A = [[int(a) for a in row] for row in obj["A"]]
        mu_obj = obj.get("mu")
        n = len(A)
        if mu_obj is None:
            mu = None
        elif "p" in mu_obj or "q" in mu_obj:
            if torus is None:
                raise ValueError("mu given as (p, q) needs a torus")
            p = [parse_scalar(x) for x in mu_obj.get("p", ["0"] * n)]
            q = [parse_scalar(x) for x in mu_obj.get("q", ["0"] * n)]
            mu = mu_from_pq(p, q, torus)
        else:
            re_ = [parse_scalar(x) for x in mu_obj.get("re", ["0"] * n)]
            im_ = [parse_scalar(x) for x in mu_obj.get("im", ["0"] * n)]
            mu = np.array([a + b * (I if not isinstance(b, complex) else 1j)
                           for a, b in zip(re_, im_)], dtype=object)
            if any(isinstance(x, complex) for x in mu):
                mu = np.array([complex(x) for x in mu], dtype=complex)
        cocycle = CocycleSet.from_json(obj["cocycle"]) if obj.get("cocycle") else None
        return cls(r, A, mu, cocycle)


def mu_from_pq(p, q, torus: TorusData):
    """mu = p + T^t q."""
    p = np.asarray(p, dtype=object)
    q = np.asarray(q, dtype=object)
    if torus.exact and all(not isinstance(x, complex) for x in list(p) + list(q)):
        return p + torus.T.T @ q
    return la.to_numeric(p) + torus.numeric().T @ la.to_numeric(q)


def _lift(M, torus: TorusData):
    """Integer/rational matrix in the arithmetic of ``torus`` (exact or complex)."""
    if torus.exact:
        return la.exact_array(np.asarray(M, dtype=object).tolist())
    return np.asarray(M, dtype=complex)


def _T(torus: TorusData):
    return torus.T if torus.exact else torus.numeric()


@dataclass(frozen=True)
class HolomorphicReport:
    holomorphic: bool
    at_residual: np.ndarray
    curvature02_residual: np.ndarray

    def to_json(self):
        return {
            "holomorphic": self.holomorphic,
            "AT_minus_transpose": [[format_scalar(x) for x in row] for row in self.at_residual],
            "curvature02_antisymmetric_part": [[format_scalar(x) for x in row]
                                               for row in self.curvature02_residual],
        }


def curvature02_coefficient(A, torus: TorusData):
    """Matrix M with Omega^(0,2) = (i/2 pi r) dzbar^t M dzbar, M = {T(T-Tbar)^-1}^t A^t (T-Tbar)^-1."""
    T = _T(torus)
    D = la.inv(T - la.conj(T))
    return (T @ D).T @ _lift(A, torus).T @ D


def is_holomorphic(bundle: BundleData, torus: TorusData) -> HolomorphicReport:
    """AT symmetric, cross-checked against vanishing of the (0,2) curvature part."""
    _same_n(bundle, torus)
    tol = torus.tol
    AT = _lift(bundle.A, torus) @ _T(torus)
    at_res = AT - AT.T
    M = curvature02_coefficient(bundle.A, torus)
    c02_res = M - M.T
    holo = la.all_zero(at_res, tol)
    if holo != la.all_zero(c02_res, None if tol is None else 1e-9 * max(1.0, la.max_abs(M))):
        raise AssertionError("AT symmetry and (0,2)-curvature vanishing disagree")
    return HolomorphicReport(holo, at_res, c02_res)


def _same_n(bundle, torus):
    if bundle.n != torus.n:
        raise ValueError(f"bundle has n={bundle.n}, torus has n={torus.n}")


def require_holomorphic(bundle: BundleData, torus: TorusData):
    if not is_holomorphic(bundle, torus).holomorphic:
        raise PreconditionError("bundle is not holomorphic: AT is not symmetric")


def mu_split(mu, torus: TorusData):
    """(p, q) real with mu = p + T^t q."""
    mu = np.asarray(mu)
    exact = torus.exact and mu.dtype == object and not any(isinstance(x, complex) for x in mu)
    T = torus.T if exact else torus.numeric()
    if not exact:
        mu = la.to_numeric(mu)
    Tt = T.T
    q = la.inv(la.imag_part(Tt)) @ la.imag_part(mu)
    p = la.real_part(mu) - la.real_part(Tt) @ q
    return p, q


# ---------------------------------------------------------------------------
# the pairing form R


@dataclass(frozen=True, eq=False)
class PairingForm:
    """Hermitian form R(z, w) = sum R_ij z_i conj(w_j) with R = R_over_pi / pi."""

    R_over_pi: np.ndarray
    exact: bool = field(default=False)

    @property
    def R(self) -> np.ndarray:
        return np.real(la.to_numeric(self.R_over_pi)) / math.pi

    def evaluate(self, z, w) -> complex:
        z, w = la.to_numeric(np.asarray(z)), la.to_numeric(np.asarray(w))
        return complex(z @ self.R @ np.conj(w))

    def lattice_pairing_over_pi(self, v: LatticeVector, w: LatticeVector, torus: TorusData):
        """R(v, w) / pi for lattice vectors (exact on exact tori).

        With v = 2pi c_v, w = 2pi c_w this is 4 c_v^t (pi R) conj(c_w).
        """
        cv, cw = lattice_coeff(v, torus), lattice_coeff(w, torus)
        return 4 * (cv @ self.R_over_pi @ la.conj(cw))

    def im_lattice_pairing(self, v: LatticeVector, w: LatticeVector, torus: TorusData) -> float:
        return float(complex(self.lattice_pairing_over_pi(v, w, torus)).imag) * math.pi


def curvature_R(bundle: BundleData, torus: TorusData) -> PairingForm:
    """R = (i/2pi){(T-Tbar)^-1}^t A, checked against (1/4pi)(Y^-1)^t A."""
    require_holomorphic(bundle, torus)
    tol = torus.tol
    T = _T(torus)
    A = _lift(bundle.A, torus)
    half_i = QI(0, Fraction(1, 2)) if torus.exact else 0.5j
    quarter = Fraction(1, 4) if torus.exact else 0.25
    route1 = half_i * la.inv(T - la.conj(T)).T @ A
    route2 = quarter * la.inv(la.imag_part(T)).T @ A
    if torus.exact:
        route2 = la.exact_array(route2.tolist())
    if not la.all_zero(route1 - route2, tol if tol is None else 1e-12 * max(1.0, la.max_abs(route1))):
        raise AssertionError("closed forms of R disagree")
    if not la.all_zero(la.imag_part(route1), tol):
        raise AssertionError("R is not real")
    if not la.is_symmetric(route1, tol):
        raise AssertionError("R is not symmetric")
    return PairingForm(route1, exact=torus.exact)


@dataclass(frozen=True)
class PairingEntry:
    kind: str
    j: int
    k: int
    value_over_pi: object
    expected_im_over_pi: object

    @property
    def ok(self) -> bool:
        im = self.value_over_pi.imag
        if isinstance(im, float):
            return abs(im - float(self.expected_im_over_pi)) <= 1e-9
        return im == self.expected_im_over_pi

    def to_json(self):
        return {
            "pair": self.kind, "j": self.j, "k": self.k,
            "value_over_pi": format_scalar(self.value_over_pi),
            "im_over_pi": format_scalar(self.value_over_pi.imag),
            "expected_im_over_pi": format_scalar(self.expected_im_over_pi),
            "ok": self.ok,
        }


def generator_pairings(bundle: BundleData, torus: TorusData):
    """R(.,.) on all generator pairs with the expected imaginary parts.

    Im R(g_j,g_k) = 0, Im R(g'_j,g'_k) = 0, Im R(g_j,g'_k) = -pi a_kj,
    Im R(g'_k,g_j) = +pi a_kj.  Entries are evaluated directly from the
    lattice vectors, not from the closed forms.
    """
    form = curvature_R(bundle, torus)
    n = bundle.n
    g = [LatticeVector.gamma(j, n) for j in range(1, n + 1)]
    gp = [LatticeVector.gamma_prime(k, n) for k in range(1, n + 1)]
    A = bundle.A
    table = []
    for j in range(n):
        for k in range(n):
            a_kj = int(A[k, j])
            table.append(PairingEntry("gamma,gamma", j + 1, k + 1,
                                      form.lattice_pairing_over_pi(g[j], g[k], torus), 0))
            table.append(PairingEntry("gamma',gamma'", j + 1, k + 1,
                                      form.lattice_pairing_over_pi(gp[j], gp[k], torus), 0))
            table.append(PairingEntry("gamma,gamma'", j + 1, k + 1,
                                      form.lattice_pairing_over_pi(g[j], gp[k], torus), -a_kj))
            table.append(PairingEntry("gamma',gamma", k + 1, j + 1,
                                      form.lattice_pairing_over_pi(gp[k], g[j], torus), a_kj))
    bad = [e for e in table if not e.ok]
    if bad:
        raise AssertionError(f"lattice pairing imaginary parts off: {[e.to_json() for e in bad]}")
    return table


# ---------------------------------------------------------------------------
# connection and curvature in (x, y) coordinates


def connection_local_xy(bundle: BundleData, x) -> np.ndarray:
    """dy-coefficients of the local connection form: -(i/2pi r)(A x + mu)."""
    x = la.to_numeric(np.asarray(x))
    A = np.asarray(bundle.A, dtype=float)
    mu = la.to_numeric(bundle.mu)
    return -1j / (2 * math.pi * bundle.r) * (A @ x + mu)


def normalized_curvature(bundle: BundleData) -> FormElement:
    """Omega' = (1/4pi^2 r) dx^t A^t dy, i.e. -Omega/(2 pi i), with scale_exp 1."""
    At = np.asarray(bundle.A, dtype=object).T
    return two_form_from_matrix(At, Fraction(1, bundle.r), scale_exp=1)


def hermitian_check(form: PairingForm, z, w, tol=1e-12) -> bool:
    a = form.evaluate(z, w)
    b = np.conj(form.evaluate(w, z))
    return abs(a - b) <= tol * max(1.0, abs(a))


__all__ = [
    "BundleData", "PairingForm", "PairingEntry", "HolomorphicReport", "PreconditionError",
    "is_holomorphic", "require_holomorphic", "mu_split", "mu_from_pq", "curvature_R",
    "generator_pairings", "connection_local_xy", "normalized_curvature",
    "curvature02_coefficient", "hermitian_check",
]

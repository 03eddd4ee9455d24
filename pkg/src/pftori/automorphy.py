"""Factor of automorphy, the semi-representation U and the isomorphism Psi.

A holomorphic bundle E_(r,A,mu,U) is isomorphic to the projectively flat
bundle with factor of automorphy

    j(g, z) = U(g) exp{ R(z, g)/r + R(g, g)/(2r) },

through the scalar gauge transformation Psi(z, zbar).  Exponentials force
floating point here; the algebraic identities behind Psi are checked on the
exact matrices first.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import linalg as la
from .bundle import (BundleData, PairingForm, PreconditionError, _lift, _T, connection_local_xy,
                     curvature_R, require_holomorphic)
from .scalars import QI, format_scalar
from .torus import LatticeVector, TorusData, generators, lattice_embed, zy_coords

REL_TOL = 1e-9


# -- the matrix script-A ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScriptA:
    """``{(T-Tbar)^-1}^t Tbar^t A^t (T-Tbar)^-1`` and the identities it satisfies."""

    matrix: np.ndarray
    identities: dict

    @property
    def numeric(self) -> np.ndarray:
        return la.to_numeric(self.matrix)

    def to_json(self):
        return {"A_script": [[format_scalar(x) for x in row] for row in self.matrix],
                "identities": dict(self.identities)}


def script_A(bundle: BundleData, torus: TorusData, *, strict: bool = True) -> ScriptA:
    """Build script-A and check symmetry, (i/2pi)(conj(SA) - SA) = R, SA T real
    and SA (T - Tbar) = -2 pi i R Tbar.

    All checks are exact on exact torus data.  R enters through its
    pi-coefficient ``pi R``, so the pi factors cancel symbolically.
    """
    require_holomorphic(bundle, torus)
    T = _T(torus)
    Tb = la.conj(T)
    D = la.inv(T - Tb)
    SA = D.T @ Tb.T @ _lift(bundle.A, torus).T @ D
    piR = curvature_R(bundle, torus).R_over_pi
    exact = torus.exact
    tol = None if exact else 1e-12 * max(1.0, la.max_abs(SA), la.max_abs(piR))
    half_i = QI(0, Fraction(1, 2)) if exact else 0.5j
    two_i = QI(0, 2) if exact else 2j
    ids = {
        "symmetric": la.is_symmetric(SA, tol),
        # (i/2pi)(conj SA - SA) = R  <=>  (i/2)(conj SA - SA) = pi R
        "t2": la.all_zero(half_i * (la.conj(SA) - SA) - piR, tol),
        "t5": la.all_zero(la.imag_part(SA @ T), tol),
        # SA (T - Tbar) = -2 pi i R Tbar  <=>  ... = -2i (pi R) Tbar
        "t6": la.all_zero(SA @ (T - Tb) + two_i * piR @ Tb, tol),
    }
    if strict and not all(ids.values()):
        raise AssertionError(f"script-A identities failed: {ids}")
    return ScriptA(SA, ids)


# -- constants, Psi and its derivative ---------------------------------------

def _numeric_data(bundle: BundleData, torus: TorusData):
    T = torus.numeric()
    D = np.linalg.inv(T - T.conj())
    mu = la.to_numeric(bundle.mu)
    return T, D, mu


def generator_constants(bundle: BundleData, torus: TorusData):
    """``c_j = exp{(i/r)({(T-Tbar)^-1}^t mu)_j}`` and ``c'_k = exp{(i/r)(mu^t (T-Tbar)^-1 Tbar)_k}``.

    ``U(gamma_j) = c_j V_j`` and ``U(gamma'_k) = c'_k U_k``.
    """
    require_holomorphic(bundle, torus)
    T, D, mu = _numeric_data(bundle, torus)
    r = bundle.r
    c = np.exp(1j / r * (D.T @ mu))
    cp = np.exp(1j / r * (mu @ D @ T.conj()))
    return c, cp


def psi_exponent(bundle: BundleData, torus: TorusData, z, SA: Optional[np.ndarray] = None) -> complex:
    """Exponent of Psi:

        (i/4pi r) z^t SA z + (i/4pi r) zbar^t conj(SA) zbar
        - (i/2pi r) z^t SA zbar + (i/2pi r) zbar^t {(T-Tbar)^-1}^t mu

    The second term carries conj(SA); only with the conjugate do the gauge
    and transition identities hold.
    """
    _, D, mu = _numeric_data(bundle, torus)
    SA = script_A(bundle, torus).numeric if SA is None else SA
    z = np.asarray(z, dtype=complex)
    zb = z.conj()
    k = 1j / (4 * math.pi * bundle.r)
    return complex(k * (z @ SA @ z) + k * (zb @ SA.conj() @ zb)
                   - 2 * k * (z @ SA @ zb) + 2 * k * (zb @ D.T @ mu))


def psi_eval(bundle: BundleData, torus: TorusData, z, SA: Optional[np.ndarray] = None) -> complex:
    return cmath.exp(psi_exponent(bundle, torus, z, SA))


def psi_gradient(bundle: BundleData, torus: TorusData, z, SA: Optional[np.ndarray] = None):
    """(d/dz, d/dzbar) of the Psi exponent, analytically (SA is symmetric)."""
    _, D, mu = _numeric_data(bundle, torus)
    SA = script_A(bundle, torus).numeric if SA is None else SA
    z = np.asarray(z, dtype=complex)
    zb = z.conj()
    k = 1j / (2 * math.pi * bundle.r)
    return k * (SA @ z - SA @ zb), k * (SA.conj() @ zb - SA.T @ z + D.T @ mu)


def _psi_gradient_fd(bundle, torus, z, SA, h=1e-6):
    z = np.asarray(z, dtype=complex)
    n = len(z)
    gz = np.zeros(n, dtype=complex)
    gzb = np.zeros(n, dtype=complex)
    f = lambda w: psi_exponent(bundle, torus, w, SA)  # noqa: E731
    for i in range(n):
        e = np.zeros(n, dtype=complex)
        e[i] = h
        fx = (f(z + e) - f(z - e)) / (2 * h)
        fy = (f(z + 1j * e) - f(z - 1j * e)) / (2 * h)
        gz[i] = (fx - 1j * fy) / 2
        gzb[i] = (fx + 1j * fy) / 2
    return gz, gzb


def connection_z(bundle: BundleData, torus: TorusData, z):
    """The local connection form rewritten as (dz, dzbar) coefficient vectors.

    With dy = (T-Tbar)^-1 (dz - dzbar), a form c^t dy has dz-part
    {(T-Tbar)^-1}^t c and the negative of that as its dzbar-part.
    """
    _, D, _ = _numeric_data(bundle, torus)
    x, _y = zy_coords(np.asarray(z, dtype=complex), torus)
    c = connection_local_xy(bundle, np.asarray(x, dtype=float))
    return D.T @ c, -(D.T @ c)


def flat_connection_z(bundle: BundleData, torus: TorusData, z, form: Optional[PairingForm] = None):
    """(dz, dzbar) coefficients of -(1/r) dz^t R zbar - (i/2pi r) mu^t (T-Tbar)^-1 dz."""
    _, D, mu = _numeric_data(bundle, torus)
    form = curvature_R(bundle, torus) if form is None else form
    z = np.asarray(z, dtype=complex)
    r = bundle.r
    dz = -(1 / r) * form.R @ z.conj() - 1j / (2 * math.pi * r) * (D.T @ mu)
    return dz, np.zeros_like(dz)


# -- factor of automorphy -----------------------------------------------------

@dataclass(eq=False)
class FactorOfAutomorphy:
    bundle: BundleData
    torus: TorusData
    pairing: PairingForm
    U_gamma: List[np.ndarray]
    U_gamma_prime: List[np.ndarray]
    _im_table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.torus.n
        gens = generators(n)
        # Im R(g_a, g_b)/pi on the 2n generators; Im R is real bilinear
        table = np.zeros((2 * n, 2 * n))
        for a, ga in enumerate(gens):
            for b, gb in enumerate(gens):
                table[a, b] = float(complex(self.pairing.lattice_pairing_over_pi(ga, gb, self.torus)).imag)
        self._im_table = table

    @classmethod
    def from_bundle(cls, bundle: BundleData, torus: TorusData) -> FactorOfAutomorphy:
        """Generators U(gamma_j) = c_j V_j, U(gamma'_k) = c'_k U_k."""
        if bundle.cocycle is None:
            raise PreconditionError("bundle has no cocycle set")
        c, cp = generator_constants(bundle, torus)
        V, U = bundle.cocycle.numeric()
        return cls(bundle, torus, curvature_R(bundle, torus),
                   [c[j] * V[j] for j in range(bundle.n)],
                   [cp[k] * U[k] for k in range(bundle.n)])

    @property
    def r(self) -> int:
        return self.bundle.r

    def im_pairing_over_pi(self, v: LatticeVector, w: LatticeVector) -> float:
        a = np.array(v.m + v.nprime, dtype=float)
        b = np.array(w.m + w.nprime, dtype=float)
        return float(a @ self._im_table @ b)

    def pairing_value(self, v: LatticeVector, w: LatticeVector) -> complex:
        return complex(self.pairing.lattice_pairing_over_pi(v, w, self.torus)) * math.pi

    def generator_relation_residual(self) -> float:
        """Max deviation from the commutation relations among the generators."""
        n, r = self.torus.n, self.r
        w = cmath.exp(2j * math.pi / r)
        Ug, Up = self.U_gamma, self.U_gamma_prime
        worst = 0.0
        for j in range(n):
            for k in range(n):
                pairs = [(Ug[j] @ Ug[k], Ug[k] @ Ug[j]), (Up[j] @ Up[k], Up[k] @ Up[j]),
                         (w ** (-int(self.bundle.A[k, j])) * Up[k] @ Ug[j], Ug[j] @ Up[k])]
                for lhs, rhs in pairs:
                    scale = max(1.0, np.abs(rhs).max())
                    worst = max(worst, float(np.abs(lhs - rhs).max()) / scale)
        return worst


def semi_rep_extend(foa: FactorOfAutomorphy, gamma: LatticeVector) -> np.ndarray:
    """U(gamma) from the generators via U(g + g') = U(g) U(g') exp{(i/r) Im R(g', g)}.

    Generators are consumed in the order gamma'_n..gamma'_1, gamma_n..gamma_1,
    one unit step at a time (inverse generators for negative coefficients).
    """
    n, r = foa.torus.n, foa.r
    out = np.eye(r, dtype=complex)
    cur = LatticeVector((0,) * n, (0,) * n)
    steps = [(LatticeVector.gamma_prime(k, n), foa.U_gamma_prime[k - 1], gamma.nprime[k - 1])
             for k in range(n, 0, -1)]
    steps += [(LatticeVector.gamma(j, n), foa.U_gamma[j - 1], gamma.m[j - 1]) for j in range(n, 0, -1)]
    for g, Ug, count in steps:
        if count == 0:
            continue
        step, M = (g, Ug) if count > 0 else (-g, np.linalg.inv(Ug))
        for _ in range(abs(count)):
            phase = cmath.exp(1j * math.pi * foa.im_pairing_over_pi(step, cur) / r)
            out = out @ M * phase
            cur = cur + step
    return out


def automorphy_exponent(foa: FactorOfAutomorphy, gamma: LatticeVector, z) -> complex:
    """R(z, gamma)/r + R(gamma, gamma)/(2r), the scalar exponent of j(gamma, z)."""
    r = foa.r
    g = lattice_embed(gamma, foa.torus)
    return foa.pairing.evaluate(np.asarray(z, dtype=complex), g) / r + foa.pairing_value(gamma, gamma) / (2 * r)


def automorphy_eval(foa: FactorOfAutomorphy, gamma: LatticeVector, z) -> np.ndarray:
    """j(gamma, z) = U(gamma) exp{R(z, gamma)/r + R(gamma, gamma)/(2r)}."""
    return semi_rep_extend(foa, gamma) * cmath.exp(automorphy_exponent(foa, gamma, z))


def _relative_gap(scaled_lhs: np.ndarray, rhs: np.ndarray) -> float:
    """||lhs - rhs|| / ||rhs||; non-finite values count as failure (inf)."""
    gap = float(np.linalg.norm(scaled_lhs - rhs) / max(np.linalg.norm(rhs), 1e-300))
    return gap if math.isfinite(gap) else math.inf


def cocycle_residual(foa: FactorOfAutomorphy, g1: LatticeVector, g2: LatticeVector, z) -> float:
    """Relative gap in j(g1+g2, z) = j(g2, z+g1) j(g1, z).

    The scalar exponentials are compared through their exponents, so large
    lattice vectors do not overflow.
    """
    z = np.asarray(z, dtype=complex)
    z1 = z + lattice_embed(g1, foa.torus)
    e = (automorphy_exponent(foa, g2, z1) + automorphy_exponent(foa, g1, z)
         - automorphy_exponent(foa, g1 + g2, z))
    rhs = semi_rep_extend(foa, g2) @ semi_rep_extend(foa, g1) * cmath.exp(e)
    return _relative_gap(rhs, semi_rep_extend(foa, g1 + g2))


def semi_rep_residual(foa: FactorOfAutomorphy, g1: LatticeVector, g2: LatticeVector) -> float:
    lhs = semi_rep_extend(foa, g1 + g2)
    rhs = semi_rep_extend(foa, g1) @ semi_rep_extend(foa, g2) * \
        cmath.exp(1j * math.pi * foa.im_pairing_over_pi(g2, g1) / foa.r)
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(lhs), 1e-300))


def constants_from_psi(bundle: BundleData, torus: TorusData, z) -> Tuple[np.ndarray, np.ndarray]:
    """The scalars Psi forces on each generator, read off at the point ``z``.

    For gamma_j this is Psi(z+g) e^{(i/r) a_j y} Psi(z)^-1 divided by
    exp{R(z,g)/r + R(g,g)/(2r)}; for gamma'_k the a_j y factor is absent.
    Agreement with :func:`generator_constants` is an independent check of
    the closed forms.
    """
    require_holomorphic(bundle, torus)
    SA = script_A(bundle, torus).numeric
    form = curvature_R(bundle, torus)
    _, D, _ = _numeric_data(bundle, torus)
    A = np.asarray(bundle.A, dtype=float)
    n, r = bundle.n, bundle.r
    z = np.asarray(z, dtype=complex)
    f0 = psi_exponent(bundle, torus, z, SA)

    def forced(g, extra):
        e = lattice_embed(g, torus)
        f1 = psi_exponent(bundle, torus, z + e, SA)
        R_gg = complex(form.lattice_pairing_over_pi(g, g, torus)) * math.pi
        return cmath.exp(f1 - f0 + extra - form.evaluate(z, e) / r - R_gg / (2 * r))

    c = np.array([forced(LatticeVector.gamma(j + 1, n),
                         1j / r * (A[:, j] @ D @ z) - 1j / r * (A[:, j] @ D @ z.conj()))
                  for j in range(n)])
    cp = np.array([forced(LatticeVector.gamma_prime(k + 1, n), 0) for k in range(n)])
    return c, cp


def constants_residual(bundle: BundleData, torus: TorusData, points) -> float:
    """Max relative gap between the closed-form constants and those forced by Psi."""
    c, cp = generator_constants(bundle, torus)
    ref = np.concatenate([c, cp])
    worst = 0.0
    for z in points:
        got = np.concatenate(constants_from_psi(bundle, torus, z))
        worst = max(worst, float(np.max(np.abs(got - ref) / np.abs(ref))))
    return worst


# -- the isomorphism check ----------------------------------------------------

@dataclass
class GaugeReport:
    t1_residual_max: float
    conjugation_residual_max: float
    identities: dict
    samples: int
    fd_residual_max: Optional[float] = None

    @property
    def ok(self) -> bool:
        return (self.t1_residual_max <= REL_TOL and self.conjugation_residual_max <= REL_TOL
                and all(self.identities.values()))

    def to_json(self):
        out = {"t1_residual_max": self.t1_residual_max,
               "conjugation_residual_max": self.conjugation_residual_max,
               "identities": dict(self.identities), "samples": self.samples, "ok": self.ok}
        if self.fd_residual_max is not None:
            out["fd_residual_max"] = self.fd_residual_max
        return out


def random_points(torus: TorusData, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Points x + T y with x, y uniform in [0, 2pi)^n."""
    T = torus.numeric()
    n = torus.n
    return [rng.uniform(0, 2 * math.pi, n) + T @ rng.uniform(0, 2 * math.pi, n) for _ in range(count)]


def gauge_and_conjugation_check(bundle: BundleData, torus: TorusData, samples: int = 100,
                                seed: int = 0, points=None,
                                finite_difference: bool = False) -> GaugeReport:
    """Residuals of the gauge identity and of the transition conjugation.

    Gauge: d(log Psi) = omega - omega~, compared in (dz, dzbar) coordinates.
    Conjugation: Psi(z+g_j) e^{(i/r) a_j.y} V_j Psi(z)^-1 = j(g_j, z) and
    Psi(z+g'_k) U_k Psi(z)^-1 = j(g'_k, z).  Both are relative residuals.
    """
    if bundle.cocycle is None:
        raise PreconditionError("bundle has no cocycle set")
    sa = script_A(bundle, torus, strict=False)
    SA = sa.numeric
    foa = FactorOfAutomorphy.from_bundle(bundle, torus)
    V, U = bundle.cocycle.numeric()
    _, D, _ = _numeric_data(bundle, torus)
    A = np.asarray(bundle.A, dtype=float)
    n, r = bundle.n, bundle.r
    if points is None:
        points = random_points(torus, samples, np.random.default_rng(seed))
    t1 = conj = 0.0
    fd = 0.0 if finite_difference else None
    for z in points:
        z = np.asarray(z, dtype=complex)
        gz, gzb = psi_gradient(bundle, torus, z, SA)
        oz, ozb = connection_z(bundle, torus, z)
        fz, fzb = flat_connection_z(bundle, torus, z, foa.pairing)
        scale = max(1.0, np.abs(oz).max(), np.abs(fz).max())
        t1 = max(t1, float(max(np.abs(gz - (oz - fz)).max(), np.abs(gzb - (ozb - fzb)).max())) / scale)
        if finite_difference:
            hz, hzb = _psi_gradient_fd(bundle, torus, z, SA)
            fd = max(fd, float(max(np.abs(hz - gz).max(), np.abs(hzb - gzb).max())) / max(1.0, np.abs(gz).max()))
        f0 = psi_exponent(bundle, torus, z, SA)
        for j in range(n):
            g = LatticeVector.gamma(j + 1, n)
            aD = A[:, j] @ D
            ay = 1j / r * (aD @ z) - 1j / r * (aD @ z.conj())
            f1 = psi_exponent(bundle, torus, z + lattice_embed(g, torus), SA)
            lhs = cmath.exp(f1 - f0 + ay - automorphy_exponent(foa, g, z)) * V[j]
            conj = max(conj, _relative_gap(lhs, semi_rep_extend(foa, g)))
        for k in range(n):
            g = LatticeVector.gamma_prime(k + 1, n)
            f1 = psi_exponent(bundle, torus, z + lattice_embed(g, torus), SA)
            lhs = cmath.exp(f1 - f0 - automorphy_exponent(foa, g, z)) * U[k]
            conj = max(conj, _relative_gap(lhs, semi_rep_extend(foa, g)))
    ids = {k: sa.identities[k] for k in ("t2", "t5", "t6")}
    ids["symmetric"] = sa.identities["symmetric"]
    return GaugeReport(t1, conj, ids, len(points), fd)

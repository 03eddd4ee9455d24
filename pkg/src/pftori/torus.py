"""The complex torus C^n / 2pi(Z^n + T Z^n) and its lattice."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import linalg as la
from .scalars import format_scalar, parse_scalar


class TorusError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationReport:
    im_positive_definite: bool
    nonsingular: bool
    failing_minor: Optional[int]
    minor_value: object
    determinant: object

    @property
    def valid(self) -> bool:
        return self.im_positive_definite and self.nonsingular

    def to_json(self):
        return {
            "valid": self.valid,
            "im_positive_definite": self.im_positive_definite,
            "nonsingular": self.nonsingular,
            "failing_minor": self.failing_minor,
            "minor_value": None if self.minor_value is None else format_scalar(self.minor_value),
            "determinant": format_scalar(self.determinant),
        }


def validate_torus(T) -> ValidationReport:
    """Check Im T positive definite (symmetric part) and det T != 0.

    Positive definiteness is decided by the leading principal minors of
    ``(Im T + Im T^t)/2`` (Sylvester), which is exact on rational input.
    """
    T = np.asarray(T)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise TorusError("period matrix must be square")
    tol = la.tol_for(T)
    Y = la.imag_part(T)
    if tol is None:
        minors = [m.real for m in la.leading_minors((Y + Y.T) * Fraction(1, 2))]
    else:
        minors = la.leading_minors(np.asarray((Y + Y.T) / 2, dtype=float))
    failing, value = None, None
    for k, m in enumerate(minors, 1):
        if (m <= 0) if tol is None else (m <= tol):
            failing, value = k, m
            break
    d = la.det(T)
    return ValidationReport(
        im_positive_definite=failing is None,
        nonsingular=not la.is_zero(d, tol),
        failing_minor=failing,
        minor_value=value,
        determinant=d,
    )


@dataclass(frozen=True)
class LatticeVector:
    """gamma = 2pi*m + 2pi*T*nprime with integer vectors m, nprime."""

    m: tuple
    nprime: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        object.__setattr__(self, "nprime", tuple(int(v) for v in self.nprime))
        if len(self.m) != len(self.nprime):
            raise ValueError("m and nprime must have the same length")

    @classmethod
    def gamma(cls, j: int, n: int) -> LatticeVector:
        """gamma_j: 2pi times the j-th unit vector (1-based)."""
        return cls(_unit(j, n), (0,) * n)

    @classmethod
    def gamma_prime(cls, k: int, n: int) -> LatticeVector:
        """gamma'_k: 2pi times the k-th column of T (1-based)."""
        return cls((0,) * n, _unit(k, n))

    def __add__(self, other: LatticeVector) -> LatticeVector:
        return LatticeVector(tuple(a + b for a, b in zip(self.m, other.m)),
                             tuple(a + b for a, b in zip(self.nprime, other.nprime)))

    def __neg__(self) -> LatticeVector:
        return LatticeVector(tuple(-a for a in self.m), tuple(-a for a in self.nprime))

    def __rmul__(self, k: int) -> LatticeVector:
        return LatticeVector(tuple(k * a for a in self.m), tuple(k * a for a in self.nprime))


def _unit(j, n):
    if not 1 <= j <= n:
        raise IndexError(j)
    return tuple(1 if i == j - 1 else 0 for i in range(n))


@dataclass(frozen=True, eq=False)
class TorusData:
    n: int
    T: np.ndarray

    def __post_init__(self):
        T = np.asarray(self.T)
        if T.shape != (self.n, self.n):
            raise TorusError(f"T has shape {T.shape}, expected ({self.n}, {self.n})")
        object.__setattr__(self, "T", T)

    @classmethod
    def validated(cls, T) -> TorusData:
        T = np.asarray(T)
        report = validate_torus(T)
        if not report.valid:
            raise TorusError(f"invalid period matrix: {report.to_json()}")
        return cls(T.shape[0], T)

    @property
    def exact(self) -> bool:
        return la.is_exact_array(self.T)

    @property
    def tol(self):
        return None if self.exact else la.DEFAULT_TOL

    @property
    def Tbar(self):
        return la.conj(self.T)

    @property
    def X(self):
        return la.real_part(self.T)

    @property
    def Y(self):
        return la.imag_part(self.T)

    def diff_inv(self):
        """(T - conj T)^{-1}."""
        return la.inv(self.T - self.Tbar)

    def numeric(self) -> np.ndarray:
        return la.to_numeric(self.T)

    def to_json(self):
        return {"n": self.n, "T": [[format_scalar(x) for x in row] for row in self.T]}

    @classmethod
    def from_json(cls, obj) -> TorusData:
        try:
            n = int(obj["n"])
            rows = [[parse_scalar(x) for x in row] for row in obj["T"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise TorusError(f"malformed torus JSON: {exc}") from exc
        if any(isinstance(x, complex) for row in rows for x in row):
            T = np.array([[complex(x) for x in row] for row in rows], dtype=complex)
        else:
            T = la.exact_array(rows)
        if T.shape != (n, n):
            raise TorusError(f"T has shape {T.shape}, expected ({n}, {n})")
        return cls.validated(T)


def lattice_coeff(v: LatticeVector, torus: TorusData):
    """``m + T nprime``, i.e. the lattice vector divided by 2pi (exact when T is)."""
    if torus.exact:
        m, npv = la.exact_array(list(v.m)), la.exact_array(list(v.nprime))
    else:
        m, npv = np.array(v.m, dtype=complex), np.array(v.nprime, dtype=complex)
    return m + torus.T @ npv


def lattice_embed(v: LatticeVector, torus: TorusData) -> np.ndarray:
    """The lattice vector ``2pi m + 2pi T nprime`` as a complex vector."""
    return 2 * math.pi * la.to_numeric(lattice_coeff(v, torus))


def generators(n: int) -> List[LatticeVector]:
    """gamma_1..gamma_n, gamma'_1..gamma'_n."""
    return [LatticeVector.gamma(j, n) for j in range(1, n + 1)] + \
        [LatticeVector.gamma_prime(k, n) for k in range(1, n + 1)]


def zy_coords(z, torus: TorusData):
    """Real coordinates (x, y) with ``z = x + T y``."""
    z = np.asarray(z)
    exact = torus.exact and la.is_exact_array(z)
    T = torus.T if exact else torus.numeric()
    if not exact:
        z = la.to_numeric(z)
    try:
        D = la.inv(T - la.conj(T))
    except np.linalg.LinAlgError as exc:
        raise TorusError("T - conj(T) is singular") from exc
    y = D @ (z - la.conj(z))
    x = z - T @ y
    if exact:
        return la.real_part(x), la.real_part(y)
    return np.real(x), np.real(y)


def xy_to_z(x, y, torus: TorusData):
    x, y = np.asarray(x), np.asarray(y)
    if torus.exact and la.is_exact_array(x) and la.is_exact_array(y):
        return la.exact_array(list(x)) + torus.T @ la.exact_array(list(y))
    return la.to_numeric(x) + torus.numeric() @ la.to_numeric(y)

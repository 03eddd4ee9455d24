"""Exact exterior algebra on the constant forms dx_1..dx_n, dy_1..dy_n.

Generators are indexed ``0..2n-1``: ``dx_i`` is ``i-1`` and ``dy_j`` is
``n+j-1``.  A :class:`FormElement` stores a dict from strictly increasing
index tuples to nonzero exact coefficients, plus an integer ``scale_exp``:
the element's value is ``(1/(4 pi^2))**scale_exp`` times the stored sum.
Keeping that transcendental factor as an exponent lets every curvature and
Chern identity be checked with rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

Index = Tuple[int, ...]


class DimensionError(ValueError):
    pass


def dx(i: int, n: int) -> int:
    """Generator index of dx_i (1-based i)."""
    if not 1 <= i <= n:
        raise IndexError(i)
    return i - 1


def dy(j: int, n: int) -> int:
    if not 1 <= j <= n:
        raise IndexError(j)
    return n + j - 1


def _sort_with_sign(idx):
    """Sort generator indices; return (sign, sorted tuple) or (0, None) on a repeat."""
    idx = list(idx)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, None
    return sign, tuple(idx)


@dataclass(frozen=True)
class FormElement:
    n: int
    terms: Dict[Index, object] = field(default_factory=dict)
    scale_exp: int = 0

    def __post_init__(self):
        clean = {}
        for key, c in self.terms.items():
            if c == 0:
                continue
            if any(k < 0 or k >= 2 * self.n for k in key):
                raise DimensionError(f"generator index out of range in {key}")
            if list(key) != sorted(set(key)):
                raise ValueError(f"index tuple {key} is not strictly increasing")
            clean[tuple(key)] = c
        object.__setattr__(self, "terms", clean)

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, n: int, scale_exp: int = 0) -> FormElement:
        return cls(n, {}, scale_exp)

    @classmethod
    def scalar(cls, n: int, c, scale_exp: int = 0) -> FormElement:
        return cls(n, {(): c}, scale_exp)

    @classmethod
    def monomial(cls, n: int, gens, c=1, scale_exp: int = 0) -> FormElement:
        sign, key = _sort_with_sign(gens)
        if sign == 0:
            return cls.zero(n, scale_exp)
        return cls(n, {key: sign * c}, scale_exp)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(k) for k in self.terms}

    @property
    def degree(self) -> int:
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("mixed-degree form has no single degree")
        return degs.pop()

    def coefficient(self, gens):
        """Coefficient on the monomial ``gens`` (any order; sign-adjusted)."""
        sign, key = _sort_with_sign(gens)
        if sign == 0:
            return 0
        return sign * self.terms.get(key, 0)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: FormElement):
        if self.n != other.n:
            raise DimensionError(f"forms over n={self.n} and n={other.n}")

    def _align(self, other: FormElement):
        self._check(other)
        if self.scale_exp == other.scale_exp or other.is_zero():
            return self.scale_exp
        if self.is_zero():
            return other.scale_exp
        raise ValueError("adding forms with different symbolic 1/(4pi^2) exponents")

    def __add__(self, other: FormElement) -> FormElement:
        exp = self._align(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return FormElement(self.n, out, exp)

    def __neg__(self) -> FormElement:
        return FormElement(self.n, {k: -c for k, c in self.terms.items()}, self.scale_exp)

    def __sub__(self, other: FormElement) -> FormElement:
        return self + (-other)

    def scale(self, c) -> FormElement:
        return FormElement(self.n, {k: c * v for k, v in self.terms.items()}, self.scale_exp)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, FormElement):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.scale_exp == other.scale_exp and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.scale_exp, frozenset(self.terms.items())))

    def wedge(self, other: FormElement) -> FormElement:
        return wedge(self, other)

    __xor__ = wedge

    def to_json(self):
        return {
            "n": self.n,
            "scale_exp": self.scale_exp,
            "terms": [
                {"gens": _gen_names(k, self.n), "coef": str(c)}
                for k, c in sorted(self.terms.items())
            ],
        }

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = [f"{c}*{'^'.join(_gen_names(k, self.n)) or '1'}" for k, c in sorted(self.terms.items())]
        prefix = f"(1/4pi^2)^{self.scale_exp} * " if self.scale_exp else ""
        return prefix + "(" + " + ".join(parts) + ")"


def _gen_names(key, n):
    return [f"dx{k + 1}" if k < n else f"dy{k - n + 1}" for k in key]


def wedge(a: FormElement, b: FormElement) -> FormElement:
    if a.n != b.n:
        raise DimensionError(f"forms over n={a.n} and n={b.n}")
    out: Dict[Index, object] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            if set(ka) & set(kb):
                continue
            sign, key = _sort_with_sign(ka + kb)
            out[key] = out.get(key, 0) + sign * ca * cb
    return FormElement(a.n, out, a.scale_exp + b.scale_exp)


def two_form_from_matrix(M, scale=1, scale_exp: int = 0) -> FormElement:
    """``sum_ij scale*M[i,j] dx_i ^ dy_j``."""
    M = np.asarray(M, dtype=object)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("two_form_from_matrix needs a square matrix")
    n = M.shape[0]
    terms = {}
    for i in range(n):
        for j in range(n):
            c = scale * M[i, j]
            if c != 0:
                terms[(i, n + j)] = c
    return FormElement(n, terms, scale_exp)


def wedge_power(f: FormElement, k: int) -> FormElement:
    """k-fold wedge of an even-degree form (square-and-multiply; even forms commute)."""
    if k < 1:
        raise ValueError("wedge_power needs k >= 1")
    if any(d % 2 for d in f.degrees()):
        raise ValueError("wedge_power is defined here for even-degree forms")
    result = None
    base = f
    while k:
        if k & 1:
            result = base if result is None else wedge(result, base)
        k >>= 1
        if k:
            base = wedge(base, base)
    return result


"""Exact arithmetic in Q(zeta_r) = Q[x]/(Phi_r(x)).

Elements are reduced modulo the r-th cyclotomic polynomial (not x^r - 1,
which is reducible), so ``==`` is equality in the field.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Tuple

Poly = Tuple[Fraction, ...]


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    a = list(a)
    lead = b[-1]
    while len(a) >= len(b):
        coef = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = coef
        for i, y in enumerate(b):
            a[shift + i] -= coef * y
        a = _trim(a)
        if not a:
            break
    return _trim(q), a


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


@lru_cache(maxsize=None)
def cyclotomic_poly(r: int) -> Poly:
    """Phi_r as coefficients (constant term first)."""
    if r < 1:
        raise ValueError("r must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (r - 1) + [Fraction(1)]
    for d in range(1, r):
        if r % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not rem
    return tuple(num)


def _reduce(coeffs, r):
    _, rem = _poly_divmod(list(coeffs), list(cyclotomic_poly(r)))
    deg = len(cyclotomic_poly(r)) - 1
    rem = list(rem) + [Fraction(0)] * (deg - len(rem))
    return tuple(rem)


def _poly_inverse_mod(a, m):
    """b with a*b = 1 mod m (m irreducible), by the extended Euclidean algorithm."""
    r0, r1 = list(m), _trim(a)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    c = r0[0]
    return [x / c for x in s0]


class Cyclotomic:
    """Element of Q(zeta_r) in the power basis 1, zeta, ..., zeta^(phi(r)-1)."""

    __slots__ = ("r", "coeffs")

    def __init__(self, r: int, coeffs=()):
        self.r = r
        self.coeffs = _reduce([Fraction(c) for c in coeffs], r)

    @classmethod
    def zeta(cls, r: int, k: int = 1) -> Cyclotomic:
        k %= r
        return cls(r, [0] * k + [1])

    @classmethod
    def one(cls, r: int) -> Cyclotomic:
        return cls(r, [1])

    @classmethod
    def zero(cls, r: int) -> Cyclotomic:
        return cls(r, [])

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.r != self.r:
                raise ValueError(f"mixing Q(zeta_{self.r}) and Q(zeta_{other.r})")
            return other
        if isinstance(other, Rational):
            return Cyclotomic(self.r, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic(self.r, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.r, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic(self.r, _poly_mul(_trim(self.coeffs), _trim(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if self == 0:
            raise ZeroDivisionError("zero has no inverse")
        return Cyclotomic(self.r, _poly_inverse_mod(self.coeffs, cyclotomic_poly(self.r)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Cyclotomic.one(self.r), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash((self.r, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __complex__(self):
        z = cmath.exp(2j * math.pi / self.r)
        return sum((float(c) * z ** k for k, c in enumerate(self.coeffs)), 0j)

    def to_json(self):
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, r: int, obj) -> Cyclotomic:
        return cls(r, [Fraction(str(c)) for c in obj])

    def __repr__(self):
        return f"Cyclotomic({self.r}, {[str(c) for c in self.coeffs]})"

"""Exact scalars: Gaussian rationals and linear polynomials in pi.

``QI`` is an element of Q(i).  ``PiLinear`` is ``a + b*pi`` with ``a, b`` in
Q(i); it is closed under addition and under multiplication by Q(i), which is
all the linear algebra on translation parts (mu, p, q, beta) ever needs.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = ["QI", "PiLinear", "as_exact", "parse_rational", "parse_scalar", "is_exact", "to_complex"]


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not exact rationals; pass a string like '1/3'")
    return Fraction(str(text).strip())


class QI:
    """Gaussian rational ``re + im*i`` with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = parse_rational(re) if not isinstance(re, Fraction) else re
        self.im = parse_rational(im) if not isinstance(im, Fraction) else im

    # numeric protocol used by numpy object arrays
    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def conjugate(self) -> QI:
        return QI(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, QI):
            return QI(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return QI(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QI):
            return QI(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return QI(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return QI(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QI):
            return QI(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)
        if isinstance(other, Rational):
            return QI(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return QI(self.re / other, self.im / other)
        if isinstance(other, QI):
            den = other.re * other.re + other.im * other.im
            if den == 0:
                raise ZeroDivisionError("division by zero Gaussian rational")
            num = self * other.conjugate()
            return QI(num.re / den, num.im / den)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return QI(other) / self
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QI(1) / (self ** -k)
        out, base = QI(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QI):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = QI(0, 1)


def _qi(x) -> QI:
    if isinstance(x, QI):
        return x
    if isinstance(x, Rational):
        return QI(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to QI")


class PiLinear:
    """``const + coef*pi`` with Q(i) coefficients."""

    __slots__ = ("const", "coef")

    def __init__(self, const=0, coef=0):
        self.const = _qi(const)
        self.coef = _qi(coef)

    @classmethod
    def pi(cls, k=1) -> PiLinear:
        return cls(0, k)

    @property
    def real(self) -> PiLinear:
        return PiLinear(self.const.re, self.coef.re)

    @property
    def imag(self) -> PiLinear:
        return PiLinear(self.const.im, self.coef.im)

    def conjugate(self) -> PiLinear:
        return PiLinear(self.const.conjugate(), self.coef.conjugate())

    def is_real(self) -> bool:
        return self.const.im == 0 and self.coef.im == 0

    def __complex__(self):
        return complex(self.const) + complex(self.coef) * math.pi

    def __float__(self):
        if not self.is_real():
            raise TypeError("non-real PiLinear")
        return complex(self).real

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.const) or bool(self.coef)

    def __neg__(self):
        return PiLinear(-self.const, -self.coef)

    def __add__(self, other):
        if isinstance(other, PiLinear):
            return PiLinear(self.const + other.const, self.coef + other.coef)
        if isinstance(other, (QI, Rational)):
            return PiLinear(self.const + other, self.coef)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (QI, Rational)):
            return PiLinear(self.const * other, self.coef * other)
        if isinstance(other, PiLinear):
            if other.coef == 0:
                return self * other.const
            if self.coef == 0:
                return other * self.const
            raise ArithmeticError("product of two pi-linear terms leaves the pi-linear space")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (QI, Rational)):
            return PiLinear(self.const / other, self.coef / other)
        if isinstance(other, PiLinear) and other.coef == 0:
            return self / other.const
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, PiLinear):
            return self.const == other.const and self.coef == other.coef
        if isinstance(other, (QI, Rational)):
            return self.coef == 0 and self.const == other
        return NotImplemented

    def __hash__(self):
        if self.coef == 0:
            return hash(self.const)
        return hash((self.const, self.coef))

    def __repr__(self):
        return f"PiLinear({self.const}, {self.coef})"

    def __str__(self):
        if self.coef == 0:
            return str(self.const)
        if self.coef.im:
            pi_part = f"+({self.coef})pi"
        else:
            c = self.coef.re
            pi_part = {1: "+pi", -1: "-pi"}.get(c, ("+" if c > 0 else "") + f"{c}pi")
        if self.const == 0:
            return pi_part.lstrip("+")
        return f"{self.const}{pi_part}"


EXACT_TYPES = (int, Fraction, QI, PiLinear)


def is_exact(x) -> bool:
    return isinstance(x, EXACT_TYPES) and not isinstance(x, bool)


def as_exact(x):
    """Lift ints/Fractions to QI; leave QI and PiLinear alone."""
    if isinstance(x, (QI, PiLinear)):
        return x
    if isinstance(x, Rational):
        return QI(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def to_complex(x) -> complex:
    if isinstance(x, (QI, PiLinear)):
        return complex(x)
    return complex(x)


_PI_TERM = re.compile(r"^\s*([+-]?[^+-]*?)\s*\*?\s*pi\s*$")


def _parse_real_pilinear(text: str) -> PiLinear:
    """Parse strings like ``"1/2"``, ``"2pi"``, ``"-pi"``, ``"1/3+2*pi"``."""
    s = text.replace(" ", "").replace("π", "pi")
    if "pi" not in s:
        return PiLinear(parse_rational(s), 0)
    # split at the sign that starts the pi term
    idx = s.index("pi")
    start = idx
    while start > 0 and s[start - 1] not in "+-":
        start -= 1
    if start > 0:
        start -= 1
    const_part, pi_part = s[:start], s[start:idx].rstrip("*")
    if idx + 2 != len(s):
        raise ValueError(f"cannot parse {text!r}: pi term must come last")
    if pi_part in ("", "+"):
        coef = Fraction(1)
    elif pi_part == "-":
        coef = Fraction(-1)
    else:
        coef = parse_rational(pi_part)
    const = parse_rational(const_part) if const_part else Fraction(0)
    return PiLinear(const, coef)


def parse_scalar(obj):
    """Parse a JSON scalar into an exact value where possible.

    Accepted forms: int; rational string (``"3/4"``); pi-linear string
    (``"1+2pi"``); ``{"re": ..., "im": ...}`` with either kind of part.
    JSON floats are kept as Python floats/complex (numeric mode).
    """
    if isinstance(obj, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(obj, int):
        return QI(obj)
    if isinstance(obj, float):
        return complex(obj)
    if isinstance(obj, str):
        val = _parse_real_pilinear(obj)
        return val.const if val.coef == 0 else val
    if isinstance(obj, dict):
        re_part = parse_scalar(obj.get("re", 0))
        im_part = parse_scalar(obj.get("im", 0))
        if isinstance(re_part, complex) or isinstance(im_part, complex):
            return complex(re_part) + 1j * complex(im_part)
        return re_part + im_part * I
    raise TypeError(f"cannot parse scalar from {obj!r}")


def format_scalar(x):
    """Inverse of :func:`parse_scalar` for JSON output."""
    if isinstance(x, PiLinear):
        if x.is_real():
            return str(x)
        return {"re": str(x.real), "im": str(x.imag)}
    if isinstance(x, QI):
        if x.im == 0:
            return str(x.re)
        return {"re": str(x.re), "im": str(x.im)}
    if isinstance(x, (int, Fraction)):
        return str(x)
    c = complex(x)
    if c.imag == 0:
        return c.real
    return {"re": c.real, "im": c.imag}


def cexp(x) -> complex:
    return cmath.exp(to_complex(x))

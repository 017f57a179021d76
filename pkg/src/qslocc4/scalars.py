"""Scalar backends.

Two coefficient fields are supported behind one small interface:

* ``exact``  -- Gaussian rationals ``p + q i`` with ``p, q`` in Q, implemented by
  :class:`GaussianRational` on top of :class:`fractions.Fraction`;
* ``float``  -- Python ``complex`` with a degree-aware zero tolerance.

Every decision the classifier takes is a zero test, so the zero test is the
only place where the two backends genuinely differ (see :func:`is_zero`).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

DEFAULT_TOL = 1e-9


class GaussianRational:
    """An element of Q(i). Immutable and hashable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):  # copy; a second argument is added as i*im
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- coercion -----------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)):
            return GaussianRational(other)
        return NotImplemented

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, complex):
            return complex(self) + other
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, complex):
            return complex(self) - other
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, complex):
            return complex(self) * other
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus |z|^2 (exact)."""
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, complex):
            return complex(self) / other
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, complex):
            return complex(self) == other
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __abs__(self):
        return math.sqrt(float(self.norm()))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    __str__ = lambda self: format_scalar(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

Scalar = Union[GaussianRational, complex]


# -- literal grammar -----------------------------------------------------------
# "p/q", "1.25", "-3", "1/2+1/2i", "0.5-2i", "i", "-i", "3/4i"
_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_LIT = re.compile(
    rf"^\s*(?P<re>[+-]?{_NUM})?\s*(?:(?P<isgn>[+-])?\s*(?P<im>{_NUM})?\s*\*?\s*(?P<i>[ij]))?\s*$"
)


def _frac(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num) / int(den)
    return Fraction(text)


def parse_scalar(text: str) -> GaussianRational:
    """Parse a scalar literal into an exact Gaussian rational.

    Decimals are read exactly (``0.1`` is 1/10), so parsing never rounds.
    """
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)):
            return GaussianRational(text)
        raise ValueError(f"scalar literal must be a string, got {type(text).__name__}")
    m = _LIT.match(text)
    if not m or not text.strip():
        raise ValueError(f"malformed scalar literal {text!r}")
    re_txt, isgn, im_txt, i_tok = m.group("re", "isgn", "im", "i")
    if i_tok is None:
        if re_txt is None:
            raise ValueError(f"malformed scalar literal {text!r}")
        return GaussianRational(_frac(re_txt))
    # "2i" parses as re="2" with no imaginary digits: reinterpret as 2i
    if im_txt is None and isgn is None and re_txt is not None:
        return GaussianRational(0, _frac(re_txt))
    if im_txt is None and isgn is None and re_txt is None:
        return I
    im = _frac(im_txt) if im_txt is not None else Fraction(1)
    if isgn == "-":
        im = -im
    re_v = _frac(re_txt) if re_txt is not None else Fraction(0)
    if re_txt is not None and isgn is None:
        raise ValueError(f"malformed scalar literal {text!r}")
    return GaussianRational(re_v, im)


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(z) -> str:
    """Canonical text form; round-trips through :func:`parse_scalar` (exact)
    or ``complex`` (float, 17 significant digits)."""
    if isinstance(z, (int, Fraction)):
        z = GaussianRational(z)
    if isinstance(z, GaussianRational):
        if z.im == 0:
            return _fmt_frac(z.re)
        im = z.im
        mag = "" if abs(im) == 1 else _fmt_frac(abs(im))
        if z.re == 0:
            return ("-" if im < 0 else "") + mag + "i"
        return _fmt_frac(z.re) + ("-" if im < 0 else "+") + mag + "i"
    z = complex(z)
    re_s = format(z.real, ".17g")
    if z.imag == 0:
        return re_s
    im_s = format(abs(z.imag), ".17g")
    return f"{re_s}{'-' if z.imag < 0 or math.copysign(1, z.imag) < 0 else '+'}{im_s}i"


# -- backend helpers -----------------------------------------------------------
def to_backend(z, backend: str):
    if backend == EXACT:
        if isinstance(z, GaussianRational):
            return z
        if isinstance(z, (int, Fraction)):
            return GaussianRational(z)
        raise TypeError("cannot convert a float scalar to the exact backend")
    if backend == FLOAT:
        return complex(z)
    raise ValueError(f"unknown backend {backend!r}")


def is_exact(z) -> bool:
    return isinstance(z, (GaussianRational, int, Fraction))


@dataclass(frozen=True)
class ZeroPolicy:
    """Zero test for quantities homogeneous in the amplitudes.

    Exact values are zero iff they are zero.  A float value ``q`` of amplitude
    degree ``deg`` is zero iff ``|q| <= tol * kappa * max(1, scale)**deg`` where
    ``scale`` is the largest amplitude modulus of the state and ``kappa`` an
    optional size constant of the formula that produced ``q`` (1 for the
    invariants and quartics; for covariant recipes, the size of the terms that
    cancel, measured by running the recipe without signs on |amplitudes|).
    """

    tol: float = DEFAULT_TOL
    scale: float = 1.0

    def zero(self, q, deg: int, kappa: float = 1.0) -> bool:
        if is_exact(q):
            return not q
        return abs(q) <= self.tol * kappa * max(1.0, self.scale) ** deg


def is_zero(q, deg: int = 0, policy: ZeroPolicy | None = None, kappa: float = 1.0) -> bool:
    return (policy or ZeroPolicy()).zero(q, deg, kappa)

"""Exact arithmetic in the quadratic field Q(sqrt5).

Rationals are :class:`fractions.Fraction`. A :class:`QuadNum` is a pair of
rationals ``(a, b)`` standing for ``a + b*sqrt5``; it is immutable, always
canonical, and never touches floating point except in :func:`quad_to_float`.
"""

from __future__ import annotations

import math
import operator
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import DomainError

__all__ = [
    "Rational",
    "QuadNum",
    "quad_arith",
    "quad_sign",
    "quad_floor",
    "quad_to_float",
    "quad_to_dyadic",
    "parse_rational",
    "GOLDEN",
    "GOLDEN_CONJ",
    "SQRT5",
]

Rational = Fraction


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text):
    """Parse ``"p/q"``, ``"p"`` or a finite decimal into a Fraction."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


class QuadNum:
    """The number ``a + b*sqrt5`` with rational ``a`` and ``b``."""

    __slots__ = ("_a", "_b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "_a", _as_fraction(a))
        object.__setattr__(self, "_b", _as_fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QuadNum is immutable")

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    @classmethod
    def coerce(cls, value) -> "QuadNum":
        if isinstance(value, QuadNum):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(value)

    def conjugate(self) -> "QuadNum":
        return QuadNum(self._a, -self._b)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 5*b**2``; zero only for zero."""
        return self._a * self._a - 5 * self._b * self._b

    def reciprocal(self) -> "QuadNum":
        n = self.norm()
        if n == 0:
            raise DomainError("division by zero in Q(sqrt5)")
        return QuadNum(self._a / n, -self._b / n)

    # arithmetic

    def __add__(self, other):
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        return QuadNum(self._a + other._a, self._b + other._b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        return QuadNum(self._a - other._a, self._b - other._b)

    def __rsub__(self, other):
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadNum(self._a * other, self._b * other)
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        return QuadNum(a1 * a2 + 5 * b1 * b2, a1 * b2 + a2 * b1)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        return other * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.reciprocal()
        out = QuadNum(1)
        for bit in bin(abs(n))[2:]:
            out = out * out
            if bit == "1":
                out = out * base
        return out

    def __neg__(self):
        return QuadNum(-self._a, -self._b)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if quad_sign(self) < 0 else self

    # comparison

    def __eq__(self, other):
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        return self._a == other._a and self._b == other._b

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b))

    def _cmp(self, other, op):
        other = _maybe_quad(other)
        if other is NotImplemented:
            return other
        return op(quad_sign(self - other), 0)

    def __lt__(self, other):
        return self._cmp(other, operator.lt)

    def __le__(self, other):
        return self._cmp(other, operator.le)

    def __gt__(self, other):
        return self._cmp(other, operator.gt)

    def __ge__(self, other):
        return self._cmp(other, operator.ge)

    def __bool__(self):
        return bool(self._a) or bool(self._b)

    def __float__(self):
        return quad_to_float(self)[0]

    def __floor__(self):
        return quad_floor(self)

    # text form

    def __str__(self):
        a, b = self._a, self._b
        if b == 0:
            return str(a)
        coef = "" if abs(b) == 1 else f"{abs(b)}*"
        if a == 0:
            return f"{'-' if b < 0 else ''}{coef}sqrt5"
        return f"{a} {'-' if b < 0 else '+'} {coef}sqrt5"

    def __repr__(self):
        return f"QuadNum('{self}')"

    _TERM = re.compile(r"[+-]?[^+-]+")

    @classmethod
    def parse(cls, text: str) -> "QuadNum":
        """Parse the text form, e.g. ``"1/2 + 1/2*sqrt5"`` or ``"-sqrt5"``.

        Whitespace is ignored; any number of rational and ``sqrt5`` terms may
        be summed.
        """
        s = re.sub(r"\s+", "", text).replace("sqrt(5)", "sqrt5").replace("√5", "sqrt5")
        if not s:
            raise ValueError("empty number")
        terms = cls._TERM.findall(s)
        if "".join(terms) != s:
            raise ValueError(f"malformed number: {text!r}")
        a = Fraction(0)
        b = Fraction(0)
        for term in terms:
            if term.endswith("sqrt5"):
                coef = term[: -len("sqrt5")]
                if coef.endswith("*"):
                    coef = coef[:-1]
                    if coef in ("", "+", "-"):
                        raise ValueError(f"malformed number: {text!r}")
                if coef in ("", "+"):
                    b += 1
                elif coef == "-":
                    b -= 1
                else:
                    b += parse_rational(coef)
            else:
                a += parse_rational(term)
        return cls(a, b)


def _maybe_quad(value):
    if isinstance(value, QuadNum):
        return value
    if isinstance(value, (int, Fraction)):
        return QuadNum(value)
    return NotImplemented


SQRT5 = QuadNum(0, 1)
GOLDEN = QuadNum(Fraction(1, 2), Fraction(1, 2))
GOLDEN_CONJ = QuadNum(Fraction(1, 2), Fraction(-1, 2))

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def quad_arith(op: str, x: QuadNum, y: QuadNum) -> QuadNum:
    """Apply ``op`` in {add, sub, mul, div} to two field elements."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(QuadNum.coerce(x), QuadNum.coerce(y))


def _sgn(q) -> int:
    return (q > 0) - (q < 0)


def quad_sign(x: QuadNum) -> int:
    """Exact sign of ``a + b*sqrt5`` using only rational arithmetic."""
    sa, sb = _sgn(x.a), _sgn(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger of a**2 and 5*b**2 wins; they are never equal
    return sa if x.a * x.a > 5 * x.b * x.b else sb


def quad_floor(x: QuadNum) -> int:
    """Greatest integer ``n`` with ``n <= x``.

    An integer bracket of width two is found from ``isqrt``; the final choice
    inside it is made by :func:`quad_sign`.
    """
    x = QuadNum.coerce(x)
    if x.b == 0:
        return math.floor(x.a)
    den = math.lcm(x.a.denominator, x.b.denominator)
    big_a = x.a.numerator * (den // x.a.denominator)
    big_b = x.b.numerator * (den // x.b.denominator)
    # floor(big_b*sqrt5); 5*big_b**2 is never a perfect square
    r = math.isqrt(5 * big_b * big_b)
    fl = r if big_b > 0 else -r - 1
    lo = (big_a + fl) // den
    hi = (big_a + fl + 1) // den + 1
    # bisection on integers: lo <= x < hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if quad_sign(x - mid) >= 0:
            lo = mid
        else:
            hi = mid
    return lo


def quad_to_dyadic(x: QuadNum, precision: int = 53) -> tuple[Fraction, Fraction]:
    """Round ``x`` to a dyadic rational with ``precision`` significant bits.

    Returns ``(value, bound)`` with ``|value - x| <= bound`` and
    ``bound = 2**(1 - precision) * (|a| + 3|b|)``. The value itself is
    accurate to within one unit in the last place, even when cancellation
    makes ``bound`` far larger than ``|x|``.
    """
    if precision < 24:
        raise DomainError("precision must be at least 24 bits")
    x = QuadNum.coerce(x)
    a, b = x.a, x.b
    bound = Fraction(2) ** (1 - precision) * (abs(a) + 3 * abs(b))
    if not x:
        return Fraction(0), Fraction(0)
    # refine sqrt5 until the enclosure is tight relative to |x|; the
    # coefficients can be huge while x itself is tiny
    k = precision + 8
    while True:
        r = math.isqrt(5 << (2 * k))
        lo, hi = a + b * Fraction(r, 1 << k), a + b * Fraction(r + 1, 1 << k)
        mag = min(abs(lo), abs(hi)) if (lo > 0) == (hi > 0) and lo and hi else 0
        if mag and abs(hi - lo) * 2 ** (precision + 2) <= mag:
            break
        k *= 2
    approx = (lo + hi) / 2
    num, den = abs(approx.numerator), approx.denominator
    # scale so that 2**(precision-1) <= |approx| * 2**e < 2**precision
    e = precision - (num.bit_length() - den.bit_length())
    while True:
        scaled = Fraction(num, den) * Fraction(2) ** e
        if scaled < 2 ** (precision - 1):
            e += 1
        elif scaled >= 2**precision:
            e -= 1
        else:
            break
    m = round(scaled)
    value = Fraction(m) / Fraction(2) ** e
    return (value if approx > 0 else -value), bound


def quad_to_float(x: QuadNum, precision: int = 53) -> tuple[float, float]:
    """Binary float approximation of ``x`` and an honest error bound.

    ``precision`` may range over 24..53 bits so that the dyadic result is
    exactly representable as a Python float.
    """
    if precision > 53:
        raise DomainError("Python floats hold at most 53 bits; use quad_to_dyadic")
    value, bound = quad_to_dyadic(x, precision)
    # float(bound) rounds; nudge upward so the reported bound stays honest
    fb = float(bound)
    if Fraction(fb) < bound:
        fb = math.nextafter(fb, math.inf)
    return float(value), fb

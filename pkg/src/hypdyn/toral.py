"""The cat map x -> Ax (mod 1) on the two-torus, computed exactly."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .exactnum import QuadNum, quad_floor, quad_to_float

__all__ = [
    "IntMat2",
    "TorusPoint",
    "FibTable",
    "cat_matrix",
    "mat_pow",
    "cat_apply",
    "orbit",
    "period",
    "order_mod",
    "fixed_point_count",
    "fibonacci",
    "torus_distance",
]


@dataclass(frozen=True)
class IntMat2:
    m11: int
    m12: int
    m21: int
    m22: int

    @classmethod
    def identity(cls) -> "IntMat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "IntMat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def parse(cls, text: str) -> "IntMat2":
        """Accepts ``"[[2,1],[1,1]]"`` or four comma/space separated integers."""
        nums = re.findall(r"-?\d+", text)
        if len(nums) != 4:
            raise ValueError(f"expected four integers, got {text!r}")
        return cls(*map(int, nums))

    def rows(self):
        return ((self.m11, self.m12), (self.m21, self.m22))

    def det(self) -> int:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> int:
        return self.m11 + self.m22

    @property
    def is_unimodular(self) -> bool:
        return self.det() in (1, -1)

    def __matmul__(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __sub__(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.m11 - other.m11, self.m12 - other.m12,
            self.m21 - other.m21, self.m22 - other.m22,
        )

    def inverse(self) -> "IntMat2":
        d = self.det()
        if d not in (1, -1):
            raise DomainError(f"matrix with determinant {d} has no integer inverse")
        return IntMat2(d * self.m22, -d * self.m12, -d * self.m21, d * self.m11)

    def mod(self, q: int) -> "IntMat2":
        return IntMat2(self.m11 % q, self.m12 % q, self.m21 % q, self.m22 % q)

    def __str__(self):
        return f"[[{self.m11},{self.m12}],[{self.m21},{self.m22}]]"


def _reduce(value) -> QuadNum:
    q = QuadNum.coerce(value)
    return q - quad_floor(q)


@dataclass(frozen=True, init=False)
class TorusPoint:
    """A point of [0,1) x [0,1); coordinates are reduced on construction."""

    x: QuadNum
    y: QuadNum

    def __init__(self, x, y):
        object.__setattr__(self, "x", _reduce(x))
        object.__setattr__(self, "y", _reduce(y))

    @classmethod
    def parse(cls, text: str) -> "TorusPoint":
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        parts = s.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected '(x, y)', got {text!r}")
        return cls(QuadNum.parse(parts[0]), QuadNum.parse(parts[1]))

    @property
    def is_rational(self) -> bool:
        return self.x.is_rational and self.y.is_rational

    def denominator(self) -> int:
        """Least common denominator of a rational point."""
        if not self.is_rational:
            raise DomainError("point has an irrational coordinate")
        return math.lcm(self.x.a.denominator, self.y.a.denominator)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.x - other.x, self.y - other.y)

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.x + other.x, self.y + other.y)

    def to_floats(self) -> tuple[float, float]:
        # a coordinate just below 1 may round up to 1.0, which is 0 on the torus
        return tuple(v if v < 1.0 else 0.0 for v in (quad_to_float(self.x)[0], quad_to_float(self.y)[0]))

    def __str__(self):
        return f"({self.x}, {self.y})"


def torus_distance(p: TorusPoint, q: TorusPoint) -> float:
    """L-infinity distance on the torus with per-coordinate wraparound.

    The difference is formed exactly, so tiny distances keep full relative
    precision.
    """
    d = p - q
    out = 0.0
    for c in (d.x, d.y):
        t = min(c, 1 - c)
        out = max(out, quad_to_float(t)[0])
    return out


class FibTable:
    """F_0..F_N from the recurrence F_n = F_{n-1} + F_{n-2}."""

    def __init__(self, n: int):
        if n < 0:
            raise DomainError("Fibonacci index must be non-negative")
        values = [0, 1]
        while len(values) <= n:
            values.append(values[-1] + values[-2])
        self.values = tuple(values[: n + 1])

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __len__(self):
        return len(self.values)


def fibonacci(n: int) -> int:
    return FibTable(n)[n]


def cat_matrix() -> IntMat2:
    return IntMat2(2, 1, 1, 1)


def mat_pow(m: IntMat2, n: int) -> IntMat2:
    """``m**n`` by binary exponentiation; negative ``n`` needs det = +-1."""
    if n < 0:
        m = m.inverse()
        n = -n
    result = IntMat2.identity()
    base = m
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def cat_apply(m: IntMat2, p: TorusPoint) -> TorusPoint:
    return TorusPoint(m.m11 * p.x + m.m12 * p.y, m.m21 * p.x + m.m22 * p.y)


def orbit(p: TorusPoint, n_from: int, n_to: int, m: IntMat2 | None = None) -> list[TorusPoint]:
    """Points ``m**k p`` for ``k = n_from..n_to`` inclusive."""
    if n_from > n_to:
        raise DomainError("n_from must not exceed n_to")
    m = cat_matrix() if m is None else m
    current = cat_apply(mat_pow(m, n_from), p) if n_from else p
    out = [current]
    for _ in range(n_to - n_from):
        current = cat_apply(m, current)
        out.append(current)
    return out


def order_mod(m: IntMat2, q: int) -> int:
    """Multiplicative order of ``m`` in GL(2, Z/qZ)."""
    if q < 1:
        raise DomainError("modulus must be positive")
    if math.gcd(m.det(), q) != 1:
        raise DomainError("matrix is not invertible modulo q")
    ident = IntMat2.identity().mod(q)
    base = m.mod(q)
    cur = base
    k = 1
    while cur != ident:
        cur = (cur @ base).mod(q)
        k += 1
    return k


def period(p: TorusPoint, m: IntMat2 | None = None) -> int:
    """Least ``n >= 1`` with ``m**n p = p`` for a rational point ``p``.

    The search is capped by the order of ``m`` modulo the common denominator,
    which certifies termination.
    """
    m = cat_matrix() if m is None else m
    if not p.is_rational:
        raise DomainError("period is only defined here for rational points")
    if not m.is_unimodular:
        raise DomainError("period needs a matrix with determinant +-1")
    q = p.denominator()
    cap = order_mod(m, q)
    i0 = int(p.x.a * q)
    j0 = int(p.y.a * q)
    i, j = i0, j0
    for n in range(1, cap + 1):
        i, j = (m.m11 * i + m.m12 * j) % q, (m.m21 * i + m.m22 * j) % q
        if (i, j) == (i0, j0):
            return n
    raise AssertionError("orbit did not close within the order of the matrix")


def fixed_point_count(n: int, m: IntMat2 | None = None) -> int:
    """Number of points with ``m**n x = x``, i.e. ``|det(m**n - I)|``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    m = cat_matrix() if m is None else m
    return abs((mat_pow(m, n) - IntMat2.identity()).det())

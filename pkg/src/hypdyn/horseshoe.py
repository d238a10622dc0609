"""A piecewise-affine Smale horseshoe on the unit square, in exact rationals.

The map sends the horizontal strip ``H_a`` affinely onto the vertical strip
``V_a`` (``a`` in {0, 1}): the x-direction is contracted by ``contraction``
and the y-direction expanded by ``expansion``. Branch 1 is folded
(orientation reversing) unless ``fold`` is false.

Points of the invariant Cantor set are represented by their codes
(:class:`~hypdyn.symbolic.BiSeq`); exact rational points stand in for them
at a finite depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError, EscapeError
from .exactnum import parse_rational
from .symbolic import BiSeq, seq_proximal

__all__ = [
    "HorseshoeParams",
    "SquarePoint",
    "Rect",
    "SymbolWindow",
    "hs_apply",
    "hs_inverse",
    "rect_for_address",
    "encode",
    "decode",
    "conjugacy_check",
    "periodic_point",
    "materialize",
    "HsProximity",
    "hs_proximal",
]


@dataclass(frozen=True)
class HorseshoeParams:
    contraction: Fraction = Fraction(1, 3)
    expansion: Fraction = Fraction(3)
    fold: bool = True

    def __post_init__(self):
        mu = Fraction(self.contraction)
        lam = Fraction(self.expansion)
        if not 0 < mu < Fraction(1, 2):
            raise DomainError("contraction must lie in (0, 1/2)")
        if not lam > 2:
            raise DomainError("expansion must exceed 2")
        object.__setattr__(self, "contraction", mu)
        object.__setattr__(self, "expansion", lam)

    @property
    def h_strips(self):
        """y-intervals of ``H_0`` and ``H_1``."""
        h = 1 / self.expansion
        return (Fraction(0), h), (1 - h, Fraction(1))

    @property
    def v_strips(self):
        """x-intervals of ``V_0`` and ``V_1``."""
        mu = self.contraction
        return (Fraction(0), mu), (1 - mu, Fraction(1))

    @classmethod
    def from_config(cls, text: str) -> "HorseshoeParams":
        """Read ``key = value`` lines (keys: contraction, expansion, fold)."""
        values = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"expected 'key = value', got {raw!r}")
            key, val = (t.strip() for t in line.split("=", 1))
            if key in ("contraction", "expansion"):
                values[key] = parse_rational(val)
            elif key == "fold":
                if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(f"fold must be a boolean, got {val!r}")
                values[key] = val.lower() in ("true", "1", "yes")
            else:
                raise ValueError(f"unknown horseshoe parameter {key!r}")
        return cls(**values)


@dataclass(frozen=True)
class SquarePoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        x, y = Fraction(self.x), Fraction(self.y)
        if not (0 <= x <= 1 and 0 <= y <= 1):
            raise DomainError(f"({x}, {y}) is outside the unit square")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def parse(cls, text: str) -> "SquarePoint":
        s = text.strip().removeprefix("(").removesuffix(")")
        parts = s.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected '(x, y)', got {text!r}")
        return cls(parse_rational(parts[0]), parse_rational(parts[1]))

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class Rect:
    x_interval: tuple
    y_interval: tuple
    address: str = ""
    orientation: Optional[str] = None

    @property
    def width(self) -> Fraction:
        return self.x_interval[1] - self.x_interval[0]

    @property
    def height(self) -> Fraction:
        return self.y_interval[1] - self.y_interval[0]

    def diameter_squared(self) -> Fraction:
        return self.width**2 + self.height**2

    def center(self) -> SquarePoint:
        return SquarePoint(sum(self.x_interval) / 2, sum(self.y_interval) / 2)

    def contains(self, p: SquarePoint) -> bool:
        return (self.x_interval[0] <= p.x <= self.x_interval[1]
                and self.y_interval[0] <= p.y <= self.y_interval[1])

    def contains_rect(self, other: "Rect") -> bool:
        return (self.x_interval[0] <= other.x_interval[0] <= other.x_interval[1] <= self.x_interval[1]
                and self.y_interval[0] <= other.y_interval[0] <= other.y_interval[1] <= self.y_interval[1])

    def disjoint(self, other: "Rect") -> bool:
        return (self.x_interval[1] < other.x_interval[0] or other.x_interval[1] < self.x_interval[0]
                or self.y_interval[1] < other.y_interval[0] or other.y_interval[1] < self.y_interval[0])

    def to_json(self) -> dict:
        return {
            "x_lo": str(self.x_interval[0]),
            "x_hi": str(self.x_interval[1]),
            "y_lo": str(self.y_interval[0]),
            "y_hi": str(self.y_interval[1]),
            "address": self.address,
        }


@dataclass(frozen=True)
class SymbolWindow:
    """Itinerary window ``s_{-k} ... s_{-1} . s_0 ... s_m``."""

    left: tuple
    right: tuple

    def __str__(self):
        return "".join(map(str, self.left)) + "." + "".join(map(str, self.right))

    @classmethod
    def parse(cls, text: str) -> "SymbolWindow":
        text = "".join(text.split())
        if text.count(".") != 1:
            raise ValueError(f"window needs exactly one '.': {text!r}")
        a, b = text.split(".")
        if any(ch not in "01" for ch in a + b):
            raise ValueError(f"window symbols must be 0 or 1: {text!r}")
        return cls(tuple(map(int, a)), tuple(map(int, b)))

    def shifted(self) -> "SymbolWindow":
        """Left shift by one: ``s_0`` moves to the left side."""
        return SymbolWindow(self.left + self.right[:1], self.right[1:])


def _strip(interval_pair, value):
    for a, (lo, hi) in enumerate(interval_pair):
        if lo <= value <= hi:
            return a
    return None


def _branch_x(params, a, x):
    mu = params.contraction
    if a == 0:
        return mu * x
    return 1 - mu * x if params.fold else 1 - mu + mu * x


def _branch_y(params, a, y):
    lam = params.expansion
    if a == 0:
        return lam * y
    return lam * (1 - y) if params.fold else lam * y - lam + 1


def _branch_x_inv(params, a, x):
    mu = params.contraction
    if a == 0:
        return x / mu
    return (1 - x) / mu if params.fold else (x - 1 + mu) / mu


def _branch_y_inv(params, a, y):
    lam = params.expansion
    if a == 0:
        return y / lam
    return 1 - y / lam if params.fold else (y + lam - 1) / lam


def hs_apply(params: HorseshoeParams, p: SquarePoint) -> SquarePoint:
    a = _strip(params.h_strips, p.y)
    if a is None:
        raise EscapeError(f"{p} escapes the square: not in H_0 or H_1", 0, "forward")
    return SquarePoint(_branch_x(params, a, p.x), _branch_y(params, a, p.y))


def hs_inverse(params: HorseshoeParams, p: SquarePoint) -> SquarePoint:
    a = _strip(params.v_strips, p.x)
    if a is None:
        raise EscapeError(f"{p} escapes the square: not in V_0 or V_1", 0, "backward")
    return SquarePoint(_branch_x_inv(params, a, p.x), _branch_y_inv(params, a, p.y))


def _interval(f, lo, hi):
    u, v = f(lo), f(hi)
    return (min(u, v), max(u, v))


def rect_for_address(params: HorseshoeParams, word: Sequence[int], orientation: str) -> Rect:
    """Vertical rectangle ``V_{s-1 s-2 ... s-k}`` or horizontal ``H_{s0 ... s(k-1)}``.

    A vertical word lists ``s_{-1}`` first: points whose ``(i-1)``-th
    preimage lies in ``V_{s_{-i}}``. A horizontal word lists ``s_0`` first:
    points whose ``i``-th image lies in ``H_{s_i}``.
    """
    word = tuple(int(c) for c in word)
    if not word or any(c not in (0, 1) for c in word):
        raise DomainError("address must be a nonempty 0/1 word")
    address = "".join(map(str, word))
    lo, hi = Fraction(0), Fraction(1)
    if orientation == "vertical":
        for a in reversed(word):
            lo, hi = _interval(lambda t: _branch_x(params, a, t), lo, hi)
        return Rect((lo, hi), (Fraction(0), Fraction(1)), address, "vertical")
    if orientation == "horizontal":
        for a in reversed(word):
            lo, hi = _interval(lambda t: _branch_y_inv(params, a, t), lo, hi)
        return Rect((Fraction(0), Fraction(1)), (lo, hi), address, "horizontal")
    raise DomainError(f"orientation must be 'vertical' or 'horizontal', got {orientation!r}")


def encode(params: HorseshoeParams, p: SquarePoint, depth: int) -> SymbolWindow:
    """Itinerary of ``p``: ``s_i`` for ``-depth <= i <= depth``.

    ``s_i`` (``i >= 0``) names the H-strip holding ``f^i(p)``; ``s_{-i}``
    (``i >= 1``) names the V-strip holding ``f^{-i+1}(p)``.
    """
    if depth < 0:
        raise DomainError("depth must be non-negative")
    right = []
    q = p
    for i in range(depth + 1):
        a = _strip(params.h_strips, q.y)
        if a is None:
            raise EscapeError(f"forward orbit of {p} escapes at step {i}", i, "forward")
        right.append(a)
        if i < depth:
            q = SquarePoint(_branch_x(params, a, q.x), _branch_y(params, a, q.y))
    left = []
    q = p
    for i in range(1, depth + 1):
        a = _strip(params.v_strips, q.x)
        if a is None:
            raise EscapeError(f"backward orbit of {p} escapes at step {i - 1}", i - 1, "backward")
        left.append(a)
        if i < depth:
            q = SquarePoint(_branch_x_inv(params, a, q.x), _branch_y_inv(params, a, q.y))
    return SymbolWindow(tuple(reversed(left)), tuple(right))


def decode(params: HorseshoeParams, window: SymbolWindow) -> Rect:
    """The rectangle ``V_{left} & H_{right}`` of all points with this window."""
    if not window.left or not window.right:
        raise DomainError("window needs symbols on both sides of the marker")
    v = rect_for_address(params, tuple(reversed(window.left)), "vertical")
    h = rect_for_address(params, window.right, "horizontal")
    return Rect(v.x_interval, h.y_interval, str(window), None)


def conjugacy_check(params: HorseshoeParams, p: SquarePoint, depth: int) -> bool:
    """``encode(f(p), depth)`` equals the shifted ``encode(p, depth + 1)``."""
    big = encode(params, p, depth + 1)
    image = encode(params, hs_apply(params, p), depth)
    shifted = big.shifted()
    # shifted carries depth+2 symbols on the left; compare the common window
    common_left = shifted.left[len(shifted.left) - depth:]
    return image.left == common_left and image.right == shifted.right


def periodic_point(params: HorseshoeParams, word: Sequence[int]) -> SquarePoint:
    """The exact point whose code is ``word`` repeated, with ``s_0 = word[0]``.

    Solves the fixed point of the affine composition of the branches in
    itinerary order.
    """
    word = tuple(int(c) for c in word)
    if not word:
        raise DomainError("word must be nonempty")
    # x -> ax*x + bx and y -> ay*y + by, composed in itinerary order
    ax, bx, ay, by = Fraction(1), Fraction(0), Fraction(1), Fraction(0)
    for a in word:
        cx = _branch_x(params, a, Fraction(0))
        sx = _branch_x(params, a, Fraction(1)) - cx
        cy = _branch_y(params, a, Fraction(0))
        sy = _branch_y(params, a, Fraction(1)) - cy
        ax, bx = sx * ax, sx * bx + cx
        ay, by = sy * ay, sy * by + cy
    return SquarePoint(bx / (1 - ax), by / (1 - ay))


def materialize(params: HorseshoeParams, code: BiSeq, left_depth: int, right_depth: int) -> SquarePoint:
    """Center of the rectangle of points sharing ``code`` on ``[-left_depth, right_depth)``."""
    window = SymbolWindow(code.window(-left_depth, 0), code.window(0, right_depth))
    return decode(params, window).center()


@dataclass
class HsProximity:
    symbolic: bool
    distances: list = field(default_factory=list)
    tolerance: float = 0.0
    tail_from: int = 0

    @property
    def min_distance(self) -> float:
        return min(self.distances)

    @property
    def tail_max(self) -> float:
        return max(self.distances[self.tail_from:])

    @property
    def geometric(self) -> bool:
        """Distances over the tail of the horizon all sit below tolerance."""
        return self.tail_max <= self.tolerance

    @property
    def corroborated(self) -> bool:
        return self.symbolic == self.geometric


def hs_proximal(params: HorseshoeParams, x_code: BiSeq, y_code: BiSeq,
                depth: int = 12, horizon: int = 40, tail_from: Optional[int] = None) -> HsProximity:
    """Symbolic proximality of two codes, with a geometric witness.

    Each code is materialized as an exact point good to ``depth`` symbols
    behind and ``horizon + depth + 1`` symbols ahead, then iterated
    ``horizon`` times with :func:`hs_apply`. The witness records the sup
    distance of the n-th images for every ``n <= horizon``.
    """
    if x_code.alphabet_size != 2 or y_code.alphabet_size != 2:
        raise DomainError("horseshoe codes use the two-symbol alphabet")
    verdict = seq_proximal(x_code, y_code)
    ahead = horizon + depth + 1
    px = materialize(params, x_code, depth, ahead)
    py = materialize(params, y_code, depth, ahead)
    dists = []
    for n in range(horizon + 1):
        dists.append(float(max(abs(px.x - py.x), abs(px.y - py.y))))
        if n < horizon:
            px, py = hs_apply(params, px), hs_apply(params, py)
    mu, lam = params.contraction, params.expansion
    # two depth-`depth` rectangles' worth of slack
    tol = float(2 * (mu**depth + lam ** -(depth + 1)))
    if tail_from is None:
        tail_from = horizon // 2
    return HsProximity(bool(verdict), dists, tol, tail_from)

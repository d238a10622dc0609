"""Shift spaces: eventually periodic bi-infinite sequences and SFTs.

Points of a shift space are represented by :class:`BiSeq`, a periodic left
tail, a finite center and a periodic right tail. These are dense in the full
shift and are exactly the points on which asymptotic and proximal behaviour
can be decided from a finite window.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "BiSeq",
    "SFT",
    "Cylinder",
    "shift",
    "seq_in_sft",
    "sft_primitivity",
    "sft_periodic_count",
    "SeqProximity",
    "seq_proximal",
    "seq_asymptotic",
    "mixing_gap",
    "adler_weiss_matrix",
    "full_shift",
    "load_sft",
    "seq_distance",
]

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _primitive_root(word: tuple) -> tuple:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class BiSeq:
    """Eventually periodic sequence ``... L L L C R R R ...``.

    Coordinate ``i`` of the sequence sits at position ``i + origin`` of the
    layout in which ``center[0]`` is position 0. Instances are always in
    canonical form: tails are primitive, the center is as short as possible
    (right tail extended first), and a purely periodic sequence has empty
    center, ``origin == 0`` and ``left == right``.
    """

    left: tuple
    center: tuple
    right: tuple
    origin: int = 0
    alphabet_size: int = 2

    def __post_init__(self):
        left = tuple(int(c) for c in self.left)
        center = tuple(int(c) for c in self.center)
        right = tuple(int(c) for c in self.right)
        if not left or not right:
            raise DomainError("periodic tails must be nonempty")
        if self.alphabet_size < 2:
            raise DomainError("alphabet must have at least two symbols")
        for c in left + center + right:
            if not 0 <= c < self.alphabet_size:
                raise DomainError(f"symbol {c} outside alphabet of size {self.alphabet_size}")
        left, center, right, origin = _canonical(
            _primitive_root(left), center, _primitive_root(right), int(self.origin)
        )
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "origin", origin)

    # constructors

    @classmethod
    def periodic(cls, word: Sequence[int], alphabet_size: int = 2) -> "BiSeq":
        """The sequence with ``s(i) = word[i mod len(word)]``."""
        word = tuple(word)
        return cls(word, (), word, 0, alphabet_size)

    @classmethod
    def constant(cls, symbol: int, alphabet_size: int = 2) -> "BiSeq":
        return cls.periodic((symbol,), alphabet_size)

    # coordinates

    def _layout(self, j: int) -> int:
        c = len(self.center)
        if 0 <= j < c:
            return self.center[j]
        if j >= c:
            return self.right[(j - c) % len(self.right)]
        return self.left[j % len(self.left)]

    def __getitem__(self, i):
        if isinstance(i, slice):
            if i.start is None or i.stop is None or i.step not in (None, 1):
                raise IndexError("windows need explicit bounds and unit step")
            return self.window(i.start, i.stop)
        return self._layout(i + self.origin)

    def window(self, lo: int, hi: int) -> tuple:
        """Symbols ``s(lo), ..., s(hi - 1)``."""
        return tuple(self._layout(i + self.origin) for i in range(lo, hi))

    @property
    def right_tail_start(self) -> int:
        """First index from which the sequence follows its right tail."""
        return len(self.center) - self.origin

    @property
    def left_tail_end(self) -> int:
        """One past the last index governed by the left tail."""
        return -self.origin

    def shift(self, n: int) -> "BiSeq":
        return BiSeq(self.left, self.center, self.right, self.origin + n, self.alphabet_size)

    # text form

    def _word(self, w) -> str:
        if self.alphabet_size <= len(_DIGITS):
            return "".join(_DIGITS[c] for c in w)
        return ",".join(str(c) for c in w)

    def __str__(self):
        c, p, q = len(self.center), len(self.right), len(self.left)
        # pad to whole tail periods so each printed tail starts in phase
        lo = (self.origin // q) * q if self.origin < 0 else 0
        hi = c + -(-(self.origin - c) // p) * p if self.origin > c else c
        disp = tuple(self._layout(j) for j in range(lo, hi))
        k = self.origin - lo
        parts = [f"({self._word(self.left)})*"]
        if k:
            parts.append(self._word(disp[:k]))
        parts.append(".")
        if disp[k:]:
            parts.append(self._word(disp[k:]))
        parts.append(f"({self._word(self.right)})*")
        return " ".join(parts)

    _PATTERN = re.compile(
        r"^\(\s*(?P<left>[^()]+?)\s*\)\s*(?:\*|\^inf)(?P<mid>[^()]*)\(\s*(?P<right>[^()]+?)\s*\)\s*(?:\*|\^inf)$"
    )

    @classmethod
    def parse(cls, text: str, alphabet_size: Optional[int] = None) -> "BiSeq":
        """Parse ``"(L)* C1 . C2 (R)*"``; the symbol after ``.`` is ``s(0)``.

        ``^inf`` may replace ``*``. Symbols are single base-36 digits, or
        comma-separated integers.
        """
        m = cls._PATTERN.match(text.strip())
        if not m:
            raise ValueError(f"malformed sequence {text!r}")
        mid = re.sub(r"\s+", "", m.group("mid"))
        if mid.count(".") != 1:
            raise ValueError(f"sequence needs exactly one '.' origin marker: {text!r}")
        c1, c2 = mid.split(".")
        left = _parse_word(m.group("left"))
        right = _parse_word(m.group("right"))
        w1, w2 = _parse_word(c1), _parse_word(c2)
        if alphabet_size is None:
            alphabet_size = max(2, max(left + right + w1 + w2) + 1)
        return cls(left, w1 + w2, right, len(w1), alphabet_size)


def _parse_word(text: str) -> tuple:
    text = re.sub(r"\s+", "", text)
    if not text:
        return ()
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    try:
        return tuple(_DIGITS.index(ch) for ch in text.lower())
    except ValueError:
        raise ValueError(f"bad symbol word {text!r}") from None


def _canonical(left, center, right, origin):
    p, q, c = len(right), len(left), len(center)

    def lay(j):
        if 0 <= j < c:
            return center[j]
        if j >= c:
            return right[(j - c) % p]
        return left[j % q]

    jr = c
    while lay(jr - 1) == lay(jr - 1 + p):
        jr -= 1
        if jr <= -p - q:
            # p-periodic on [-p-q, inf) and the left tail is q-periodic,
            # so the whole sequence is p-periodic
            word = tuple(lay(j + origin) for j in range(p))
            return word, (), word, 0
    jl = min(0, jr)
    while jl < jr and lay(jl) == lay(jl - q):
        jl += 1
    new_center = tuple(lay(j) for j in range(jl, jr))
    new_right = tuple(lay(j) for j in range(jr, jr + p))
    new_left = tuple(lay(j) for j in range(jl - q, jl))
    return new_left, new_center, new_right, origin - jl


def shift(s: BiSeq, n: int) -> BiSeq:
    """The sequence ``i -> s(i + n)``."""
    return s.shift(n)


def seq_distance(x: BiSeq, y: BiSeq, max_radius: int = 64) -> float:
    """``2**-r`` with ``r`` the largest radius of agreement around index 0.

    Agreement beyond ``max_radius`` is reported as distance 0.
    """
    if x[0] != y[0]:
        return 1.0
    r = 0
    while r < max_radius and x[r + 1] == y[r + 1] and x[-r - 1] == y[-r - 1]:
        r += 1
    return 0.0 if r >= max_radius else 2.0**-r


@dataclass(frozen=True)
class SFT:
    """Vertex shift given by a square 0/1 adjacency matrix."""

    adjacency: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.adjacency)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise DomainError("adjacency must be a nonempty square matrix")
        if any(v not in (0, 1) for r in rows for v in r):
            raise DomainError("adjacency entries must be 0 or 1")
        for k in range(n):
            if not any(rows[k]) or not any(r[k] for r in rows):
                raise DomainError(f"symbol {k} is stranded (empty row or column)")
        object.__setattr__(self, "adjacency", rows)

    @property
    def alphabet_size(self) -> int:
        return len(self.adjacency)

    def allows(self, a: int, b: int) -> bool:
        return self.adjacency[a][b] == 1

    def admissible(self, word: Sequence[int]) -> bool:
        if any(not 0 <= c < self.alphabet_size for c in word):
            return False
        return all(self.allows(a, b) for a, b in zip(word, word[1:]))

    def matrix(self) -> np.ndarray:
        return np.array(self.adjacency, dtype=np.int64)

    @classmethod
    def parse(cls, text: str) -> "SFT":
        rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    def to_text(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.adjacency) + "\n"


@dataclass(frozen=True)
class Cylinder:
    """``{s : s(start + k) = word[k] for all k}``."""

    word: tuple
    start: int = 0

    def __post_init__(self):
        word = tuple(int(c) for c in self.word)
        if not word:
            raise DomainError("cylinder word must be nonempty")
        object.__setattr__(self, "word", word)


def full_shift(k: int = 2) -> SFT:
    return SFT(tuple((1,) * k for _ in range(k)))


def adler_weiss_matrix() -> SFT:
    """The 5-symbol Markov partition matrix of the cat map (symbols 1..5 -> 0..4)."""
    top = (1, 0, 1, 1, 0)
    bottom = (0, 1, 0, 0, 1)
    return SFT((top, top, top, bottom, bottom))


def load_sft(name: str) -> SFT:
    """Resolve ``adler-weiss``, ``full`` / ``full:K``, ``golden`` or a file path."""
    if name == "adler-weiss":
        return adler_weiss_matrix()
    if name == "golden":
        return SFT(((1, 1), (1, 0)))
    if name == "full" or name.startswith("full:"):
        return full_shift(int(name.split(":")[1]) if ":" in name else 2)
    with open(name) as fh:
        return SFT.parse(fh.read())


def seq_in_sft(s: BiSeq, sft: SFT) -> bool:
    """Every adjacent pair of ``s`` is an allowed transition of ``sft``."""
    if s.alphabet_size != sft.alphabet_size:
        raise DomainError(
            f"alphabet mismatch: sequence has {s.alphabet_size} symbols, SFT has {sft.alphabet_size}"
        )
    lo = s.left_tail_end - len(s.left) - 1
    hi = s.right_tail_start + len(s.right) + 1
    w = s.window(lo, hi + 1)
    return all(sft.allows(a, b) for a, b in zip(w, w[1:]))


def _bool_powers(sft: SFT, k_max: int) -> list[np.ndarray]:
    """Reachability matrices ``[M**0 > 0, M**1 > 0, ..., M**k_max > 0]``."""
    m = sft.matrix()
    out = [np.eye(sft.alphabet_size, dtype=np.int64)]
    for _ in range(k_max):
        out.append(((out[-1] @ m) > 0).astype(np.int64))
    return out


def sft_primitivity(sft: SFT, k_max: int = 50) -> Optional[int]:
    """Least ``k <= k_max`` with every entry of ``M**k`` positive."""
    if k_max < 1:
        raise DomainError("k_max must be at least 1")
    for k, p in enumerate(_bool_powers(sft, k_max)):
        if k >= 1 and p.all():
            return k
    return None


def sft_periodic_count(sft: SFT, n: int) -> int:
    """Number of points with ``shift**n s = s``, which is ``trace(M**n)``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    m = [list(r) for r in sft.adjacency]
    k = len(m)
    result = [[int(i == j) for j in range(k)] for i in range(k)]
    base = m
    e = n
    while e:
        if e & 1:
            result = _imatmul(result, base)
        base = _imatmul(base, base)
        e >>= 1
    return sum(result[i][i] for i in range(k))


def _imatmul(a, b):
    k = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(k)] for i in range(k)]


@dataclass(frozen=True)
class SeqProximity:
    """Proximality verdict with the window that decided it.

    ``start`` and ``period`` describe the compared window
    ``[start, start + period)``; ``side`` says which tails agreed.
    """

    proximal: bool
    side: Optional[str]
    start: int
    period: int

    def __bool__(self):
        return self.proximal


def _check_alphabets(x: BiSeq, y: BiSeq):
    if x.alphabet_size != y.alphabet_size:
        raise DomainError("sequences use different alphabets")


def _right_tails_agree(x: BiSeq, y: BiSeq):
    start = max(x.right_tail_start, y.right_tail_start)
    per = math.lcm(len(x.right), len(y.right))
    return x.window(start, start + per) == y.window(start, start + per), start, per


def _left_tails_agree(x: BiSeq, y: BiSeq):
    end = min(x.left_tail_end, y.left_tail_end)
    per = math.lcm(len(x.left), len(y.left))
    return x.window(end - per, end) == y.window(end - per, end), end - per, per


def seq_proximal(x: BiSeq, y: BiSeq, two_sided: bool = False) -> SeqProximity:
    """Decide whether ``shift**n x`` and ``shift**n y`` get arbitrarily close.

    By default only ``n -> +inf`` is allowed: for eventually periodic points
    this holds iff the right tails coincide in the alignment both sequences
    share, which one ``lcm``-window past both tail starts decides. With
    ``two_sided=True``, agreement of the left tails (``n -> -inf``) also
    counts.
    """
    _check_alphabets(x, y)
    ok, start, per = _right_tails_agree(x, y)
    if ok:
        return SeqProximity(True, "right", start, per)
    if two_sided:
        ok_l, start_l, per_l = _left_tails_agree(x, y)
        if ok_l:
            return SeqProximity(True, "left", start_l, per_l)
    return SeqProximity(False, None, start, per)


def seq_asymptotic(x: BiSeq, y: BiSeq) -> bool:
    """``x(i) == y(i)`` for all sufficiently large ``i``."""
    _check_alphabets(x, y)
    return _right_tails_agree(x, y)[0]


def mixing_gap(sft: SFT, u: Cylinder, v: Cylinder, n_max: int) -> Optional[int]:
    """Least ``N >= 1`` with ``shift**n(U) & V`` nonempty for all ``N <= n <= n_max``.

    ``shift**n(U)`` meets ``V`` iff some admissible sequence carries
    ``u.word`` at ``u.start`` and ``v.word`` at ``v.start + n``. When the
    two words do not overlap this is the positivity of one entry of a power
    of the adjacency matrix. Returns ``None`` when ``n_max`` itself misses.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    for cyl in (u, v):
        if not sft.admissible(cyl.word):
            raise DomainError(f"cylinder word {cyl.word} is not admissible")
    lu, lv = len(u.word), len(v.word)
    offsets = [v.start + n - u.start for n in range(1, n_max + 1)]
    gap_max = max(max(o - lu for o in offsets), max(-o - lv for o in offsets), 0)
    reach = _bool_powers(sft, gap_max + 1)

    def hits(offset):
        if offset >= lu:
            return bool(reach[offset - lu + 1][u.word[-1], v.word[0]])
        if offset + lv <= 0:
            return bool(reach[-offset - lv + 1][v.word[-1], u.word[0]])
        lo = min(0, offset)
        merged = {}
        for k, c in enumerate(u.word):
            merged[k] = c
        for k, c in enumerate(v.word):
            pos = offset + k
            if merged.setdefault(pos, c) != c:
                return False
        word = [merged[i] for i in range(lo, lo + len(merged))]
        return sft.admissible(word)

    flags = [hits(o) for o in offsets]
    if not flags[-1]:
        return None
    n = n_max
    while n > 1 and flags[n - 2]:
        n -= 1
    return n

from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from hypdyn.errors import DomainError
from hypdyn.symbolic import (
    SFT,
    BiSeq,
    Cylinder,
    adler_weiss_matrix,
    full_shift,
    load_sft,
    mixing_gap,
    seq_asymptotic,
    seq_distance,
    seq_in_sft,
    seq_proximal,
    sft_periodic_count,
    sft_primitivity,
    shift,
)

AW_ROWS = [[1, 0, 1, 1, 0]] * 3 + [[0, 1, 0, 0, 1]] * 2

words = lambda lo, hi: st.lists(st.integers(0, 1), min_size=lo, max_size=hi).map(tuple)


@st.composite
def biseqs(draw, max_period=6, max_center=8):
    left = draw(words(1, max_period))
    center = draw(words(0, max_center))
    right = draw(words(1, max_period))
    origin = draw(st.integers(-4, len(center) + 4))
    return BiSeq(left, center, right, origin)


def layout_value(left, center, right, origin, i):
    """Direct coordinate rule, independent of the canonical form."""
    j = i + origin
    if 0 <= j < len(center):
        return center[j]
    if j >= len(center):
        return right[(j - len(center)) % len(right)]
    return left[j % len(left)]


ZEROS = BiSeq.constant(0)
ONES = BiSeq.constant(1)


def test_canonical_forms():
    assert str(BiSeq.parse("(0)* . 111 (1)*")) == "(0)* . (1)*"
    s = BiSeq.parse("(01)* . (0101)*")
    assert s == BiSeq.periodic((0, 1)) and s.center == () and s.origin == 0
    assert BiSeq.parse("(0)^inf 1 . 0 (10)^inf") == BiSeq((0,), (1, 0), (1, 0), 1)


@given(st.data())
def test_construction_keeps_coordinates(data):
    left = data.draw(words(1, 6))
    center = data.draw(words(0, 8))
    right = data.draw(words(1, 6))
    origin = data.draw(st.integers(-5, 12))
    s = BiSeq(left, center, right, origin)
    for i in range(-30, 31):
        assert s[i] == layout_value(left, center, right, origin, i)


@given(biseqs(), st.integers(0, 3), st.integers(0, 3))
def test_canonical_form_is_unique(s, a, b):
    # unroll whole tail periods into the center: same sequence, same form
    lo = s.left_tail_end - a * len(s.left)
    hi = s.right_tail_start + b * len(s.right)
    t = BiSeq(s.left, s.window(lo, hi), s.right, -lo)
    assert t == s
    # rotated tails describe the same sequence too
    u = BiSeq(s.left[-1:] + s.left[:-1], s.window(lo - 1, hi), s.right, 1 - lo)
    assert u == s


@given(biseqs())
def test_text_roundtrip(s):
    assert BiSeq.parse(str(s)) == s


def test_parse_errors():
    for bad in ["0 . 1", "(0)* 1 (1)*", "(0)* . . (1)*", "()* . (1)*"]:
        with pytest.raises(ValueError):
            BiSeq.parse(bad)
    with pytest.raises(DomainError):
        BiSeq((2,), (), (0,), 0, 2)


def test_wide_alphabet_text():
    s = BiSeq((11,), (3,), (0, 12), 0, 13)
    assert str(s) == "(b)* . 3 (0c)*"
    assert BiSeq.parse(str(s), 13) == s


def test_shift_examples():
    assert shift(ZEROS, 5) == ZEROS
    s = BiSeq.parse("(0)* . (1)*")
    assert s[-1] == 0 and s[0] == 1
    assert shift(s, 1)[-1] == 1 and shift(s, -1)[0] == 0
    assert str(shift(BiSeq.parse("(0)* 1 . (0)*"), 3)) == "(0)* 1000 . (0)*"


@given(biseqs(), st.integers(-20, 20), st.integers(-20, 20))
def test_shift_group_action(s, m, n):
    assert shift(shift(s, m), n) == shift(s, m + n)
    t = shift(s, n)
    assert t.window(-10, 10) == s.window(n - 10, n + 10)


def test_distance():
    assert seq_distance(ZEROS, ONES) == 1.0
    assert seq_distance(ZEROS, ZEROS) == 0.0
    y = BiSeq.parse("(0)* . 0001 (0)*")
    # agreement on [-2, 2] only
    assert seq_distance(ZEROS, y) == 2.0**-2


def test_sft_membership():
    aw = adler_weiss_matrix()
    assert seq_in_sft(ZEROS, full_shift(2))
    assert not seq_in_sft(ONES, SFT(((1, 1), (1, 0))))
    assert seq_in_sft(BiSeq.periodic((0, 2, 3, 1), 5), aw)
    assert seq_in_sft(BiSeq.periodic((0, 0, 2, 3, 1), 5), aw)
    assert not seq_in_sft(BiSeq.periodic((0, 1), 5), aw)
    with pytest.raises(DomainError):
        seq_in_sft(ZEROS, aw)


@given(st.data())
def test_sft_membership_against_windows(data):
    left = data.draw(st.lists(st.integers(0, 4), min_size=1, max_size=4))
    center = data.draw(st.lists(st.integers(0, 4), max_size=5))
    right = data.draw(st.lists(st.integers(0, 4), min_size=1, max_size=4))
    s = BiSeq(left, center, right, 0, 5)
    w = s.window(-40, 40)
    brute = all(AW_ROWS[a][b] for a, b in zip(w, w[1:]))
    assert seq_in_sft(s, adler_weiss_matrix()) == brute


def test_sft_validation():
    with pytest.raises(DomainError):
        SFT(((1, 0), (1, 0)))
    with pytest.raises(DomainError):
        SFT(((1, 2), (1, 1)))
    assert SFT.parse("1 1\n1 0\n") == SFT(((1, 1), (1, 0)))


def test_adler_weiss_matrix():
    aw = adler_weiss_matrix()
    assert [list(r) for r in aw.adjacency] == AW_ROWS
    assert aw.adjacency[0][0] == 1 and aw.adjacency[3][0] == 0
    assert [sum(r) for r in aw.adjacency] == [3, 3, 3, 2, 2]


def test_load_sft(tmp_path):
    assert load_sft("adler-weiss") == adler_weiss_matrix()
    assert load_sft("full:3") == full_shift(3)
    assert load_sft("golden") == SFT(((1, 1), (1, 0)))
    path = tmp_path / "m.txt"
    path.write_text(adler_weiss_matrix().to_text())
    assert load_sft(str(path)) == adler_weiss_matrix()


def test_primitivity():
    assert sft_primitivity(adler_weiss_matrix()) == 2
    m = np.array(AW_ROWS)
    assert (m @ m > 0).all() and not (m > 0).all()
    assert sft_primitivity(full_shift(2)) == 1
    assert sft_primitivity(SFT(((1, 0), (0, 1)))) is None
    assert sft_primitivity(SFT(((0, 1), (1, 0))), 40) is None


# 5**n words for the five-symbol matrix, so it stops earlier
@pytest.mark.parametrize("name, n", [("golden", n) for n in range(1, 13)]
                         + [("full", n) for n in range(1, 13)]
                         + [("adler-weiss", n) for n in range(1, 8)])
def test_periodic_count_brute_force(name, n):
    sft = load_sft(name)
    rows = [list(r) for r in sft.adjacency]
    assert sft_periodic_count(sft, n) == len(oracles.periodic_words(rows, n))


def test_periodic_count_examples():
    assert sft_periodic_count(full_shift(2), 3) == 8
    assert sft_periodic_count(adler_weiss_matrix(), 1) == 3
    assert sft_periodic_count(adler_weiss_matrix(), 2) == 7
    # exact beyond 64-bit range
    assert sft_periodic_count(full_shift(2), 100) == 2**100


def test_proximal_examples():
    s = BiSeq.parse("(01)* 1 . 00 (011)*")
    assert seq_proximal(s, s)
    bump = BiSeq.parse("(0)* . 1 (0)*")
    assert seq_proximal(ZEROS, bump)
    assert not seq_proximal(ZEROS, ONES)
    a, b = BiSeq.periodic((0, 1)), BiSeq.periodic((1, 0))
    assert not seq_proximal(a, b) and not seq_asymptotic(a, b)


def test_asymptotic_examples():
    x = BiSeq.parse("(0)* 1 0 0 . (0)*")
    assert x[-3] == 1
    assert seq_asymptotic(x, ZEROS)
    assert not seq_asymptotic(ZEROS, ONES)


def test_two_sided_flag():
    x = BiSeq.parse("(0)* . (1)*")
    assert not seq_proximal(x, ZEROS)
    v = seq_proximal(x, ZEROS, two_sided=True)
    assert v and v.side == "left"


def test_certificate_window():
    x = BiSeq.parse("(0)* 1 . 0 (01)*")
    y = BiSeq.parse("(1)* . (011)*")
    v = seq_proximal(x, y)
    assert not v and v.period == 6
    assert x.window(v.start, v.start + v.period) != y.window(v.start, v.start + v.period)


@given(biseqs(), biseqs())
def test_proximal_symmetric(x, y):
    assert bool(seq_proximal(x, y)) == bool(seq_proximal(y, x))


@given(biseqs(), biseqs(), st.integers(-10, 10))
def test_proximal_shift_invariant(x, y, n):
    assert bool(seq_proximal(x, y)) == bool(seq_proximal(shift(x, n), shift(y, n)))


@given(biseqs(max_center=6), biseqs(max_center=6))
def test_proximal_matches_horizon_oracle(x, y):
    assert bool(seq_proximal(x, y)) == oracles.horizon_proximal(x, y, radius=64, shifts=128)


def test_alphabet_mismatch():
    with pytest.raises(DomainError):
        seq_proximal(ZEROS, BiSeq.constant(0, 3))


def test_mixing_examples():
    full = full_shift(2)
    u, v = Cylinder((0, 1, 1)), Cylinder((1, 0, 0))
    assert mixing_gap(full, u, v, 20) <= 3
    assert mixing_gap(full, Cylinder((0,)), Cylinder((0,)), 20) == 1
    aw = adler_weiss_matrix()
    assert mixing_gap(aw, Cylinder((0, 2)), Cylinder((3, 1)), 20) <= 4
    with pytest.raises(DomainError):
        mixing_gap(aw, Cylinder((0, 1)), Cylinder((0,)), 5)


def test_mixing_never_when_not_irreducible():
    swap_free = SFT(((1, 0), (0, 1)))
    assert mixing_gap(swap_free, Cylinder((0,)), Cylinder((1,)), 10) is None


@pytest.mark.parametrize("lu, lv", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)])
def test_mixing_against_windowed_search(lu, lv):
    rows = [[1, 1], [1, 0]]
    sft = SFT(tuple(map(tuple, rows)))
    for u in product(range(2), repeat=lu):
        for v in product(range(2), repeat=lv):
            if not (sft.admissible(u) and sft.admissible(v)):
                continue
            n_max = 8
            gap = mixing_gap(sft, Cylinder(u), Cylinder(v), n_max)
            hits = [oracles.windowed_mixing_hit(rows, u, n, v) for n in range(1, n_max + 1)]
            assert hits[-1]
            expected = n_max
            while expected > 1 and hits[expected - 2]:
                expected -= 1
            assert gap == expected


def test_mixing_offsets_respect_start_indices():
    full = full_shift(2)
    # v sits left of u until n = 5, where the two symbols collide
    assert mixing_gap(full, Cylinder((0,), 5), Cylinder((1,), 0), 10) == 6
    assert mixing_gap(full, Cylinder((0,), 5), Cylinder((0,), 0), 10) == 1
    sft = SFT(((1, 1), (1, 0)))
    assert mixing_gap(sft, Cylinder((1,), 0), Cylinder((1,), 0), 10) == 2

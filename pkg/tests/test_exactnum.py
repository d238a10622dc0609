from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hypdyn.errors import DomainError
from hypdyn.exactnum import (
    GOLDEN,
    GOLDEN_CONJ,
    SQRT5,
    QuadNum,
    parse_rational,
    quad_arith,
    quad_floor,
    quad_sign,
    quad_to_dyadic,
    quad_to_float,
)

LAM = QuadNum(Fraction(3, 2), Fraction(1, 2))
LAM_P = QuadNum(Fraction(3, 2), Fraction(-1, 2))

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)
quads = st.builds(QuadNum, rationals, rationals)
nonzero_quads = quads.filter(bool)


def test_golden_norm():
    assert quad_arith("mul", GOLDEN, GOLDEN_CONJ) == -1


def test_golden_relation():
    assert GOLDEN - 1 / GOLDEN == 1
    assert GOLDEN == 1 + GOLDEN.reciprocal()


def test_golden_squared_is_lambda():
    assert quad_arith("mul", GOLDEN, GOLDEN) == GOLDEN + 1 == LAM


def test_eigenvalue_relations():
    assert LAM * LAM_P == 1
    assert LAM + LAM_P == 3


def test_division_by_zero():
    with pytest.raises(DomainError):
        quad_arith("div", GOLDEN, QuadNum(0))
    with pytest.raises(DomainError):
        QuadNum(0).reciprocal()


def test_unknown_op():
    with pytest.raises(ValueError):
        quad_arith("pow", GOLDEN, GOLDEN)


@pytest.mark.parametrize("x, expected", [
    (GOLDEN_CONJ, -1),
    (QuadNum(0), 0),
    (LAM - 1, 1),
    (QuadNum(-3, 1), -1),
    (QuadNum(3, -1), 1),
    (QuadNum(Fraction(9, 4), -1), 1),
])
def test_sign_examples(x, expected):
    assert quad_sign(x) == expected


@pytest.mark.parametrize("x, expected", [
    (GOLDEN, 1),
    (-GOLDEN, -2),
    (QuadNum(Fraction(7, 2)), 3),
    (QuadNum(-3), -3),
    (SQRT5 * 1000, 2236),
])
def test_floor_examples(x, expected):
    assert quad_floor(x) == expected


def test_float_examples():
    v, err = quad_to_float(GOLDEN, 53)
    assert v == 1.618033988749895 and err > 0
    assert quad_to_float(QuadNum(0)) == (0.0, 0.0)
    v = quad_to_float(LAM_P)[0]
    assert v == pytest.approx(0.3819660112501051, abs=1e-16)
    # correctly rounded: (3 - sqrt5)/2 = 0.38196601125010515179...
    assert v == float(Fraction("0.381966011250105151795413165634"))


def test_float_precision_limits():
    with pytest.raises(DomainError):
        quad_to_float(GOLDEN, 23)
    with pytest.raises(DomainError):
        quad_to_float(GOLDEN, 54)
    value, bound = quad_to_dyadic(GOLDEN, 200)
    assert abs(QuadNum(value) - GOLDEN) <= bound


def test_float_survives_cancellation():
    # F_61 - F_60 * golden = golden' ** 60: tiny, with huge coefficients
    f60, f61 = 1548008755920, 2504730781961
    x = f61 - f60 * GOLDEN
    assert x == GOLDEN_CONJ ** 60
    v, _ = quad_to_float(x)
    assert 0 < v < 1e-12
    assert v * float(GOLDEN) ** 60 == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("text, expected", [
    ("1/2 + 1/2*sqrt5", GOLDEN),
    ("3/2-1/2sqrt(5)", LAM_P),
    ("-1/2*√5", QuadNum(0, Fraction(-1, 2))),
    ("sqrt5", SQRT5),
    ("7", QuadNum(7)),
])
def test_parse(text, expected):
    assert QuadNum.parse(text) == expected


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        QuadNum.parse("1 + sqrt7")
    with pytest.raises(ValueError):
        parse_rational("1/0")


@given(quads)
def test_text_roundtrip(x):
    assert QuadNum.parse(str(x)) == x


@given(quads, quads)
def test_field_laws(x, y):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) - y == x
    assert x * (y + 1) == x * y + x


@given(quads, nonzero_quads)
def test_division_inverts_multiplication(x, y):
    assert quad_arith("div", quad_arith("mul", x, y), y) == x


@given(nonzero_quads)
def test_reciprocal(x):
    assert x * x.reciprocal() == 1
    assert x.norm() == x.a ** 2 - 5 * x.b ** 2


@given(quads, quads)
def test_equality_is_structural(x, y):
    assert (x == y) == (x.a == y.a and x.b == y.b)
    if x == y:
        assert hash(x) == hash(y)


@given(quads)
def test_sign_against_high_precision(x):
    # oracle: compare against an integer square root at 200 bits
    import math
    k = 200
    s5 = Fraction(math.isqrt(5 << (2 * k)), 1 << k)
    approx = x.a + x.b * s5
    err = abs(x.b) / (1 << k)
    s = quad_sign(x)
    if not x:
        assert s == 0
    elif abs(approx) > err:
        assert s == (1 if approx > 0 else -1)


@given(quads)
def test_floor_brackets(x):
    n = quad_floor(x)
    assert quad_sign(x - n) >= 0
    assert quad_sign(x - (n + 1)) < 0


@given(quads, st.integers(min_value=24, max_value=53))
def test_float_bound_is_honest(x, precision):
    value, bound = quad_to_dyadic(x, precision)
    # interval check at doubled precision
    ref, ref_bound = quad_to_dyadic(x, 2 * precision)
    assert abs(value - ref) <= bound + ref_bound
    assert abs(QuadNum(value) - x) <= bound
    fv, fb = quad_to_float(x, precision)
    assert Fraction(fb) >= bound
    assert Fraction(fv) == value


@given(quads)
def test_float_is_relatively_accurate(x):
    assume(x)
    value, _ = quad_to_dyadic(x, 53)
    err = abs(QuadNum(value) - x)
    # one unit in the last place, decided exactly
    assert err <= abs(x) * Fraction(1, 2**51)

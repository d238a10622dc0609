from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypdyn.errors import DomainError
from hypdyn.exactnum import GOLDEN, QuadNum, quad_sign
from hypdyn.toral import TorusPoint, cat_apply, cat_matrix, orbit, period, torus_distance
from hypdyn.ultralimit import (
    LimitProbe,
    idempotent_stage_check,
    inverse_slope_limit_table,
    plim_probe,
    recurrence_times,
    slope_limit_table,
)

LAM_P = QuadNum(Fraction(3, 2), Fraction(-1, 2))
O = TorusPoint(0, 0)
HALF = TorusPoint(Fraction(1, 2), Fraction(1, 2))
small = st.builds(Fraction, st.integers(0, 29), st.integers(1, 30))
rational_points = st.builds(TorusPoint, small, small)


def test_probe_validation():
    with pytest.raises(DomainError):
        LimitProbe((1, 2))
    with pytest.raises(DomainError):
        LimitProbe((1, 3, 2))
    with pytest.raises(DomainError):
        LimitProbe((1, 2, 3), tolerance=0)
    assert LimitProbe.arithmetic(3, 3, 4).times == (3, 6, 9, 12)


def test_probe_examples():
    r = plim_probe(O, LimitProbe.arithmetic(0, 1, 10))
    assert r.verdict == "converged" and r.limit == (0.0, 0.0)
    r = plim_probe(TorusPoint(LAM_P, 0), LimitProbe.arithmetic(1, 1, 40))
    assert r.verdict == "converged"
    assert torus_distance(TorusPoint(*map(Fraction, r.limit)), O) < 1e-12
    r = plim_probe(HALF, LimitProbe.arithmetic(3, 3, 10))
    assert r.verdict == "converged" and r.limit == (0.5, 0.5)


def test_probe_diverges_on_a_cycle():
    r = plim_probe(HALF, LimitProbe.arithmetic(1, 1, 30))
    assert r.verdict == "diverged"


def test_probe_inconclusive_on_an_unstable_point():
    x = TorusPoint(GOLDEN - 1, 0)
    r = plim_probe(x, LimitProbe.arithmetic(1, 1, 12))
    assert r.verdict == "inconclusive"
    assert r.to_json()["limit"] is None


@given(rational_points, st.integers(1, 4))
def test_probe_along_period_is_exact(x, start):
    k = period(x)
    r = plim_probe(x, LimitProbe.arithmetic(start * k, k, 6))
    assert r.verdict == "converged"
    assert all(c == 0.0 for c in r.cauchy_radius)


def test_slope_examples():
    rows = slope_limit_table(5)
    assert rows[0].ratio == Fraction(1, 2) and rows[0].error == pytest.approx(0.118, abs=1e-3)
    assert rows[1].ratio == Fraction(3, 5) and rows[1].error == pytest.approx(0.018, abs=1e-3)
    assert rows[4].ratio == Fraction(55, 89) and rows[4].error < 1 / 89**2
    assert rows[4].csv_row()[1] == "55/89"


def test_inverse_slope_examples():
    rows = inverse_slope_limit_table(3)
    assert rows[0].ratio == Fraction(-1, 2) and rows[0].error == pytest.approx(0.118, abs=1e-3)
    assert rows[1].ratio == Fraction(-3, 5) and rows[1].error == pytest.approx(0.018, abs=1e-3)
    assert all(r.ratio < 0 for r in inverse_slope_limit_table(40))


def test_slope_bound_law():
    rows = slope_limit_table(40)
    assert all(r.within_bound for r in rows)
    for r in rows:
        # recheck exactly, independent of the stored flag
        f = r.ratio.denominator
        err = QuadNum(r.ratio) - (GOLDEN - 1)
        assert quad_sign(abs(err) * f * f - 1) < 0


def test_slope_errors_decrease_one_sided():
    # even-index convergents all undershoot golden - 1
    rows = slope_limit_table(40)
    signs = [quad_sign(QuadNum(r.ratio) - (GOLDEN - 1)) for r in rows]
    assert set(signs) == {-1}
    errs = [abs(QuadNum(r.ratio) - (GOLDEN - 1)) for r in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_full_convergent_sequence_alternates():
    fib = [0, 1]
    while len(fib) < 84:
        fib.append(fib[-1] + fib[-2])
    signs = [quad_sign(QuadNum(Fraction(fib[k], fib[k + 1])) - (GOLDEN - 1)) for k in range(1, 82)]
    assert all(a == -b for a, b in zip(signs, signs[1:]))


def test_slope_domain():
    with pytest.raises(DomainError):
        slope_limit_table(0)


@pytest.mark.parametrize("x", [O, HALF, TorusPoint(Fraction(1, 5), Fraction(2, 5))])
def test_idempotent_examples(x):
    assert idempotent_stage_check(x, 5)


def test_idempotent_domain():
    with pytest.raises(DomainError):
        idempotent_stage_check(TorusPoint(GOLDEN, 0))


def test_recurrence_examples():
    assert recurrence_times(HALF, 20, 1e-9).times == [3, 6, 9, 12, 15, 18]
    assert recurrence_times(O, 20, 1e-9).times == list(range(1, 21))
    r = recurrence_times(HALF, 20, 1e-9)
    assert r.gaps == [3] * 5 and r.max_gap == 3


def test_stable_leaf_point_never_returns():
    # the orbit falls into the origin, at distance 0.38... from x
    x = TorusPoint(LAM_P, 0)
    assert recurrence_times(x, 40, 0.1).times == []
    assert min(torus_distance(p, x) for p in orbit(x, 1, 40)) > 0.1


def test_recurrence_domain():
    with pytest.raises(DomainError):
        recurrence_times(O, 0, 0.1)
    with pytest.raises(DomainError):
        recurrence_times(O, 5, 0.0)


@given(rational_points)
def test_recurrence_consistency(x):
    k = period(x)
    horizon = 3 * k
    a = cat_matrix()
    p, dists = x, []
    for _ in range(horizon):
        p = cat_apply(a, p)
        dists.append(torus_distance(p, x))
    nonzero = [d for d in dists if d > 0]
    eps = min(nonzero) / 2 if nonzero else 0.5
    assert recurrence_times(x, horizon, eps).times == [k, 2 * k, 3 * k]

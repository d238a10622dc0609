"""Finite-stage probes of limits of iterates of the cat map.

Ultrafilter limits cannot be represented, so everything here looks at
explicit subsequences of exact orbits and reports what the finite data show.
None of these probes asserts that ``f^n`` converges pointwise; they only
report subsequence behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError
from .exactnum import GOLDEN, QuadNum, quad_sign, quad_to_float
from .toral import (
    FibTable,
    IntMat2,
    TorusPoint,
    cat_apply,
    cat_matrix,
    mat_pow,
    period,
    torus_distance,
)

__all__ = [
    "LimitProbe",
    "ConvergenceReport",
    "plim_probe",
    "SlopeRow",
    "slope_limit_table",
    "inverse_slope_limit_table",
    "idempotent_stage_check",
    "RecurrenceReport",
    "recurrence_times",
]

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LimitProbe:
    """A strictly increasing list of times and a convergence tolerance."""

    times: tuple
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        times = tuple(int(t) for t in self.times)
        if len(times) < 3:
            raise DomainError("a probe needs at least three times")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainError("probe times must be strictly increasing")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        object.__setattr__(self, "times", times)

    @classmethod
    def arithmetic(cls, start: int, step: int, count: int, tolerance: float = DEFAULT_TOLERANCE):
        if step < 1:
            raise DomainError("step must be positive")
        return cls(tuple(start + k * step for k in range(count)), tolerance)

    @property
    def horizon(self) -> int:
        return len(self.times)


@dataclass
class ConvergenceReport:
    values: list
    cauchy_radius: list
    verdict: str
    limit: Optional[tuple] = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "limit": list(self.limit) if self.limit is not None else None,
            "values": [list(v) for v in self.values],
            "cauchy_radius": self.cauchy_radius,
        }


def _clusters(points: Sequence[TorusPoint], radius: float) -> list[list[int]]:
    """Single-linkage clusters of ``points`` at the given radius."""
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i):
            if torus_distance(points[i], points[j]) < radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def plim_probe(x: TorusPoint, probe: LimitProbe, m: Optional[IntMat2] = None) -> ConvergenceReport:
    """Evaluate ``f^n(x)`` at the probe times and classify the tail.

    ``converged`` needs the last ``ceil(horizon/3)`` values pairwise within
    tolerance. ``diverged`` needs two clusters in that tail, each visited at
    least twice, separated by more than ten tolerances. Anything else is
    ``inconclusive``.
    """
    m = cat_matrix() if m is None else m
    times = probe.times
    exact = [cat_apply(mat_pow(m, times[0]), x)]
    for prev, nxt in zip(times, times[1:]):
        exact.append(cat_apply(mat_pow(m, nxt - prev), exact[-1]))
    values = [p.to_floats() for p in exact]

    h = len(exact)
    # cauchy_radius[k]: largest pairwise distance among values k..end
    radius = [0.0] * h
    running = 0.0
    for k in range(h - 1, -1, -1):
        for j in range(k + 1, h):
            running = max(running, torus_distance(exact[k], exact[j]))
        radius[k] = running

    tail = exact[h - math.ceil(h / 3):]
    tol = probe.tolerance
    if radius[h - len(tail)] < tol:
        return ConvergenceReport(values, radius, "converged", values[-1])
    groups = [g for g in _clusters(tail, tol) if len(g) >= 2]
    if len(groups) >= 2:
        reps = [tail[g[0]] for g in groups]
        sep = min(torus_distance(reps[i], reps[j]) for i in range(len(reps)) for j in range(i))
        if sep > 10 * tol:
            return ConvergenceReport(values, radius, "diverged")
    return ConvergenceReport(values, radius, "inconclusive")


@dataclass(frozen=True)
class SlopeRow:
    n: int
    ratio: Fraction
    error: float
    bound: float
    within_bound: bool

    def csv_row(self):
        return [self.n, str(self.ratio), repr(float(self.ratio)), repr(self.error), repr(self.bound)]


def _slope_rows(n_max: int, sign: int) -> list[SlopeRow]:
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    fib = FibTable(2 * n_max + 1)
    target = sign * (GOLDEN - 1)
    rows = []
    for n in range(1, n_max + 1):
        ratio = Fraction(sign * fib[2 * n], fib[2 * n + 1])
        err = QuadNum(ratio) - target
        if quad_sign(err) < 0:
            err = -err
        f2 = fib[2 * n + 1] ** 2
        # |ratio - target| * F^2 < 1, decided exactly
        within = quad_sign(err * f2 - 1) < 0
        rows.append(SlopeRow(n, ratio, quad_to_float(err)[0], 1 / f2, within))
    return rows


def slope_limit_table(n_max: int) -> list[SlopeRow]:
    """Ratios ``F_2n / F_2n+1`` against their limit ``golden - 1``."""
    return _slope_rows(n_max, 1)


def inverse_slope_limit_table(n_max: int) -> list[SlopeRow]:
    """Ratios ``-F_2n / F_2n+1`` of the inverse iterates against ``1 - golden``."""
    return _slope_rows(n_max, -1)


def idempotent_stage_check(x: TorusPoint, stages: int = 5, m: Optional[IntMat2] = None) -> bool:
    """``f^{jk}(f^{ik}(x)) == x`` for ``0 <= i, j <= stages``, ``k`` the period of ``x``."""
    m = cat_matrix() if m is None else m
    if not x.is_rational:
        raise DomainError("idempotent stage check needs a rational (periodic) point")
    k = period(x, m)
    powers = [mat_pow(m, i * k) for i in range(stages + 1)]
    for i in range(stages + 1):
        xi = cat_apply(powers[i], x)
        for j in range(stages + 1):
            if cat_apply(powers[j], xi) != x:
                return False
    return True


@dataclass
class RecurrenceReport:
    times: list = field(default_factory=list)

    @property
    def gaps(self) -> list:
        return [b - a for a, b in zip(self.times, self.times[1:])]

    @property
    def max_gap(self) -> Optional[int]:
        return max(self.gaps) if len(self.times) > 1 else None


def recurrence_times(x: TorusPoint, horizon: int, eps: float, m: Optional[IntMat2] = None) -> RecurrenceReport:
    """All ``1 <= n <= horizon`` with ``dist(f^n x, x) < eps``."""
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    if not eps > 0:
        raise DomainError("eps must be positive")
    m = cat_matrix() if m is None else m
    report = RecurrenceReport()
    p = x
    for n in range(1, horizon + 1):
        p = cat_apply(m, p)
        if torus_distance(p, x) < eps:
            report.times.append(n)
    return report

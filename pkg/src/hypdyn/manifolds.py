"""Eigen-structure of the cat map, leaf membership and the proximal relation.

With coordinates in Q(sqrt5), deciding whether a torus point lies on the
stable or unstable leaf through the origin reduces to two linear equations
over Q, so the proximal relation is exactly decidable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .exactnum import GOLDEN, GOLDEN_CONJ, QuadNum, quad_to_float
from .toral import IntMat2, TorusPoint, cat_apply, cat_matrix, torus_distance

__all__ = [
    "Direction",
    "EigenData",
    "eigen_data",
    "leaf_slope_ratio",
    "leaf_membership",
    "ProximalKind",
    "ProximalityVerdict",
    "proximal",
    "LeafDescriptor",
    "CellKind",
    "ProximalCell",
    "proximal_cell",
    "contraction_profile",
    "IProximalReport",
    "i_proximal_witness",
]

ORIGIN = TorusPoint(0, 0)


class Direction(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


def _direction(value) -> Direction:
    return value if isinstance(value, Direction) else Direction(value)


@dataclass(frozen=True)
class EigenData:
    lam: QuadNum
    lam_prime: QuadNum
    v_lam: tuple[QuadNum, QuadNum]
    v_lam_prime: tuple[QuadNum, QuadNum]


def _matvec(m: IntMat2, v):
    return (m.m11 * v[0] + m.m12 * v[1], m.m21 * v[0] + m.m22 * v[1])


def eigen_data() -> EigenData:
    """Eigenvalues and eigenvectors of ``[[2,1],[1,1]]``, checked exactly."""
    lam = QuadNum(Fraction(3, 2), Fraction(1, 2))
    lam_p = QuadNum(Fraction(3, 2), Fraction(-1, 2))
    v = (GOLDEN, QuadNum(1))
    vp = (GOLDEN_CONJ, QuadNum(1))
    a = cat_matrix()
    for val, vec in ((lam, v), (lam_p, vp)):
        if _matvec(a, vec) != (val * vec[0], val * vec[1]):
            raise AssertionError("eigenpair check failed")
    if lam * lam_p != 1 or not (lam > 1 > lam_p > 0):
        raise AssertionError("eigenvalue ordering check failed")
    return EigenData(lam, lam_p, v, vp)


def leaf_slope_ratio(direction) -> QuadNum:
    """x/y ratio ``g`` of the eigenline: (g, 1) spans it."""
    return GOLDEN if _direction(direction) is Direction.UNSTABLE else GOLDEN_CONJ


def leaf_membership(d: TorusPoint, direction) -> Optional[tuple[int, int]]:
    """Integer lift ``(m, n)`` putting ``d + (m, n)`` on the eigenline, if any.

    Writing ``g = 1/2 + s/2*sqrt5`` (``s = +1`` unstable, ``-1`` stable), the
    identity ``d1 + m = g (d2 + n)`` splits into its rational and sqrt5 parts,
    which pin down ``n`` and then ``m`` uniquely.
    """
    s = 1 if _direction(direction) is Direction.UNSTABLE else -1
    a1, b1, a2, b2 = d.x.a, d.x.b, d.y.a, d.y.b
    n = s * (2 * b1 - b2) - a2
    m = (a2 + n) / 2 + Fraction(5 * s) * b2 / 2 - a1
    if n.denominator != 1 or m.denominator != 1:
        return None
    m, n = int(m), int(n)
    g = leaf_slope_ratio(direction)
    assert d.x + m == g * (d.y + n)
    return m, n


class ProximalKind(str, enum.Enum):
    EQUAL = "Equal"
    PROXIMAL_STABLE = "ProximalStable"
    PROXIMAL_UNSTABLE = "ProximalUnstable"
    NOT_PROXIMAL = "NotProximal"


@dataclass(frozen=True)
class ProximalityVerdict:
    kind: ProximalKind
    certificate: Optional[tuple[int, int]] = None
    # a homoclinic difference lies on both leaves; the unstable lift is kept here
    unstable_certificate: Optional[tuple[int, int]] = None

    @property
    def is_proximal(self) -> bool:
        return self.kind is not ProximalKind.NOT_PROXIMAL

    def leaf_slope(self) -> Optional[QuadNum]:
        if self.kind is ProximalKind.PROXIMAL_STABLE:
            return 1 / leaf_slope_ratio(Direction.STABLE)
        if self.kind is ProximalKind.PROXIMAL_UNSTABLE:
            return 1 / leaf_slope_ratio(Direction.UNSTABLE)
        return None

    def to_json(self) -> dict:
        slope = self.leaf_slope()
        out = {
            "kind": self.kind.value,
            "certificate": list(self.certificate) if self.certificate else None,
            "leaf_slope": str(slope) if slope is not None else None,
        }
        if self.unstable_certificate is not None and self.kind is ProximalKind.PROXIMAL_STABLE:
            out["unstable_certificate"] = list(self.unstable_certificate)
        return out


def proximal(x: TorusPoint, y: TorusPoint, semicascade: bool = False) -> ProximalityVerdict:
    """Decide whether ``(x, y)`` is a proximal pair of the cat map.

    Pairs on a common stable leaf or a common unstable leaf, and only those,
    are proximal for the two-sided cascade. With ``semicascade=True`` only
    forward iterates count, so only stable pairs qualify. A difference on
    both leaves (a homoclinic point) is reported as stable, with the
    unstable lift attached.
    """
    if x == y:
        return ProximalityVerdict(ProximalKind.EQUAL)
    d = x - y
    st = leaf_membership(d, Direction.STABLE)
    un = None if semicascade else leaf_membership(d, Direction.UNSTABLE)
    if st is not None:
        return ProximalityVerdict(ProximalKind.PROXIMAL_STABLE, st, un)
    if un is not None:
        return ProximalityVerdict(ProximalKind.PROXIMAL_UNSTABLE, un)
    return ProximalityVerdict(ProximalKind.NOT_PROXIMAL)


@dataclass(frozen=True)
class LeafDescriptor:
    base: TorusPoint
    direction: Direction

    def slope(self) -> QuadNum:
        return 1 / leaf_slope_ratio(self.direction)

    def contains(self, p: TorusPoint) -> bool:
        return leaf_membership(p - self.base, self.direction) is not None

    def to_json(self) -> dict:
        return {"base": str(self.base), "direction": self.direction.value, "slope": str(self.slope())}


class CellKind(str, enum.Enum):
    BOTH_LEAVES = "BothLeaves"
    UNSTABLE_LEAF = "UnstableLeaf"
    STABLE_LEAF = "StableLeaf"
    POINT_ONLY = "PointOnlyDescription"


@dataclass(frozen=True)
class ProximalCell:
    """The proximal cell ``P[x]`` as the union of the listed leaves.

    ``inferred`` marks the case of a point off both leaves through the
    origin, where the cell is read off the product form of the proximal
    relation rather than from an explicit case formula.
    """

    kind: CellKind
    leaves: tuple[LeafDescriptor, ...]
    inferred: bool = False

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "leaves": [leaf.to_json() for leaf in self.leaves]}
        if self.inferred:
            out["note"] = "inferred from P(T2) = Wu x Wu u Ws x Ws; this case has no explicit formula"
        return out


def proximal_cell(x: TorusPoint) -> ProximalCell:
    """Classify ``P[x] = W_u(x) u W_s(x)`` relative to the origin's leaves.

    Each leaf is reported with base point the origin whenever ``x`` lies on
    the corresponding leaf through the origin.
    """
    on_u = leaf_membership(x, Direction.UNSTABLE) is not None
    on_s = leaf_membership(x, Direction.STABLE) is not None
    leaf_u = LeafDescriptor(ORIGIN if on_u else x, Direction.UNSTABLE)
    leaf_s = LeafDescriptor(ORIGIN if on_s else x, Direction.STABLE)
    if x == ORIGIN:
        return ProximalCell(CellKind.BOTH_LEAVES, (leaf_u, leaf_s))
    # a homoclinic point lies on both origin leaves; stable wins, as in proximal()
    if on_s:
        return ProximalCell(CellKind.STABLE_LEAF, (leaf_s, leaf_u))
    if on_u:
        return ProximalCell(CellKind.UNSTABLE_LEAF, (leaf_u, leaf_s))
    return ProximalCell(CellKind.POINT_ONLY, (leaf_u, leaf_s), inferred=True)


def contraction_profile(x: TorusPoint, y: TorusPoint, direction: str = "forward",
                        n_max: int = 20) -> list[tuple[int, float]]:
    """Torus distances ``dist(f^n x, f^n y)`` for ``n = 0..n_max``.

    ``direction="backward"`` iterates the inverse map instead.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if direction not in ("forward", "backward"):
        raise DomainError(f"unknown direction {direction!r}")
    a = cat_matrix() if direction == "forward" else cat_matrix().inverse()
    out = [(0, torus_distance(x, y))]
    # iterate the exact difference; the map is linear
    d = x - y
    for n in range(1, n_max + 1):
        d = cat_apply(a, d)
        out.append((n, torus_distance(d, ORIGIN)))
    return out


@dataclass
class IProximalReport:
    passed: bool
    direction: Direction
    steps: int
    max_distances: list[float] = field(default_factory=list)
    schedule: list[float] = field(default_factory=list)

    @property
    def final_max(self) -> float:
        return self.max_distances[-1] if self.max_distances else 0.0


def i_proximal_witness(points, direction, steps: int = 30) -> IProximalReport:
    """Check that points on one leaf collapse together under iteration.

    Stable-leaf sets are iterated forward, unstable-leaf sets backward. At
    step ``n`` the largest pairwise distance must stay below
    ``C * lam_prime**n`` where ``C`` is the largest initial spread measured
    along the leaf.
    """
    direction = _direction(direction)
    points = list(points)
    if not points:
        raise DomainError("need at least one point")
    base = points[0]
    lifts = []
    for p in points:
        cert = leaf_membership(p - base, direction)
        if cert is None:
            raise DomainError(f"{p} is not on the {direction.value} leaf through {base}")
        d = p - base
        lifts.append((d.x + cert[0], d.y + cert[1]))
    spread = 0.0
    for i in range(len(lifts)):
        for j in range(i):
            for k in (0, 1):
                spread = max(spread, abs(quad_to_float(lifts[i][k] - lifts[j][k])[0]))
    lam_p = float(eigen_data().lam_prime)
    a = cat_matrix() if direction is Direction.STABLE else cat_matrix().inverse()
    current = points
    report = IProximalReport(True, direction, steps)
    for n in range(steps + 1):
        worst = 0.0
        for i in range(len(current)):
            for j in range(i):
                worst = max(worst, torus_distance(current[i], current[j]))
        bound = spread * lam_p**n * (1 + 1e-9) + 1e-300
        report.max_distances.append(worst)
        report.schedule.append(bound)
        if worst > bound:
            report.passed = False
        current = [cat_apply(a, p) for p in current]
    return report

"""CM points on the signed modular curves, as exact data.

A point is stored as the signed form whose root it is — never as a floating
complex number — so the dictionary between classes of forms and classes of
points is a by-construction bijection and every claim about it is tested
through the exact equivalence predicates.  The sign selects the half-plane:
+ is the root (-b + sqrt(D))/(2a) in the upper half-plane, - its complex
conjugate below the real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .congruence import CongKind, cong_equivalent, enumerate_classes
from .forms import QuadForm, QuadIrrational, SignedForm

CURVES = ("y1", "y")

_KIND_OF_CURVE = {"y1": CongKind.UPPER_UNIPOTENT, "y": CongKind.FULL_LEVEL}


def curve_kind(curve: str) -> CongKind:
    if curve not in _KIND_OF_CURVE:
        raise ValueError(f"curve must be one of {CURVES}, got {curve!r}")
    return _KIND_OF_CURVE[curve]


@dataclass(frozen=True)
class CMPoint:
    """An exact CM point, carried by the signed form it is a root of."""

    carrier: SignedForm

    @property
    def disc(self) -> int:
        """The point's own discriminant: that of the primitive form vanishing at it."""
        return self.carrier.discriminant()

    def tau(self) -> QuadIrrational:
        return self.carrier.root()

    def primitive_mod(self, n: int) -> bool:
        return math.gcd(self.carrier.form.a, n) == 1

    def conjugate_point(self) -> "CMPoint":
        """Complex conjugation: same form, other half-plane."""
        return CMPoint(self.carrier.negate())

    def to_json(self) -> dict:
        t = self.tau()
        return {
            "tau": {
                "num": t.num,
                "den": t.den,
                "disc": t.disc,
                "half_plane": "upper" if t.in_upper_half_plane() else "lower",
            },
            "form": self.carrier.to_json(),
        }


def cm_from_tau(a: int, b: int, c: int, sign: int = 1) -> CMPoint:
    """The CM point whose coordinate is a root of a*x^2 + b*x + c.

    sign +1 takes the upper-half-plane root, -1 the lower.  The coefficient
    checks (primitive, positive definite) are the constructor's.
    """
    return CMPoint(SignedForm(QuadForm(a, b, c), sign))


def cm_from_value(t: QuadIrrational) -> CMPoint:
    """The CM point sitting at an explicitly given quadratic irrational.

    Recovers the primitive integral polynomial with t as a root: for
    t = (m + e*sqrt(D))/d it is (d^2, -2*m*d, m^2 - D) divided by its content,
    which also computes the canonical discriminant of the point regardless of
    how t was presented.
    """
    m, d, big_d = t.num, t.den, t.disc
    g = math.gcd(math.gcd(d * d, 2 * m * d), m * m - big_d)
    form = QuadForm(d * d // g, -2 * m * d // g, (m * m - big_d) // g)
    point = CMPoint(SignedForm(form, 1 if t.in_upper_half_plane() else -1))
    assert point.tau() == t
    return point


def point_of_class(f: SignedForm) -> CMPoint:
    """The point class of a signed form class, at representative level.

    Well-definedness is the content of the root-transport law
    root(f^g) = g^{-1}(root f); the class-level bijection is this map read on
    representatives.
    """
    return CMPoint(f)


def class_of_point(p: CMPoint, n: int) -> SignedForm:
    """The signed form class of a point on a level-n curve.

    ValueError if the point is not primitive mod n (it lies on no level-n
    curve in this family).
    """
    if not p.primitive_mod(n):
        raise ValueError(f"point of discriminant {p.disc} is not primitive mod {n}")
    return p.carrier


def equivalent_points(p: CMPoint, q: CMPoint, n: int, curve: str) -> bool:
    """Whether two points coincide on the level-n curve ("y1" or "y")."""
    if p.disc != q.disc:
        return False
    return cong_equivalent(p.carrier, q.carrier, n, curve_kind(curve)) is not None


@dataclass(frozen=True)
class CMClassSet:
    """One representative point per class of the level-n curve at a discriminant."""

    disc: int
    level: int
    curve: str
    classes: tuple[CMPoint, ...]

    def locate(self, p: CMPoint) -> int:
        if p.disc != self.disc:
            raise LookupError(f"point has discriminant {p.disc}, set has {self.disc}")
        for i, q in enumerate(self.classes):
            if equivalent_points(p, q, self.level, self.curve):
                return i
        raise LookupError(f"point {p.to_json()} not in the enumerated classes")


def cm_class_set(d: int, n: int, curve: str) -> CMClassSet:
    """Every class of discriminant-d points on the signed level-n curve."""
    kind = curve_kind(curve)
    reps = enumerate_classes(d, n, kind, signed=True)
    return CMClassSet(d, n, curve, tuple(CMPoint(f) for f in reps))


def partition_by_disc(points) -> dict[int, tuple[CMPoint, ...]]:
    """Group points by their own discriminant; every point lands in exactly one cell."""
    cells: dict[int, list[CMPoint]] = {}
    for p in points:
        cells.setdefault(p.disc, []).append(p)
    return {d: tuple(ps) for d, ps in cells.items()}

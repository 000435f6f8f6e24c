"""Binary quadratic forms with exact arithmetic.

Primitive positive definite integer forms a*x^2 + b*x*y + c*y^2, the right
SL2(Z) action Q^g(v) = Q(g*v), Gauss reduction with a unimodular witness,
automorph groups, and the quadratic irrational roots of forms.  Everything is
integer/rational exact; no floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


def is_discriminant(value: int) -> bool:
    """True for a negative integer congruent to 0 or 1 mod 4."""
    return value < 0 and value % 4 in (0, 1)


def require_discriminant(value: int) -> int:
    if not is_discriminant(value):
        raise ValueError(f"{value} is not a negative discriminant (need < 0 and = 0,1 mod 4)")
    return value


@dataclass(frozen=True)
class UnimodMatrix:
    """2x2 integer matrix [[p, q], [r, s]] of determinant 1."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.p * self.s - self.q * self.r != 1:
            raise ValueError(f"determinant of {self.entries()} is not 1")

    @staticmethod
    def identity() -> "UnimodMatrix":
        return UnimodMatrix(1, 0, 0, 1)

    def __mul__(self, other: "UnimodMatrix") -> "UnimodMatrix":
        return UnimodMatrix(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )

    def __neg__(self) -> "UnimodMatrix":
        return UnimodMatrix(-self.p, -self.q, -self.r, -self.s)

    def inverse(self) -> "UnimodMatrix":
        return UnimodMatrix(self.s, -self.q, -self.r, self.p)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.p, self.q, self.r, self.s)

    def to_json(self) -> list[int]:
        """Row-major [p, q, r, s]."""
        return [self.p, self.q, self.r, self.s]


IDENTITY = UnimodMatrix.identity()
SWAP = UnimodMatrix(0, -1, 1, 0)


def translation(m: int) -> UnimodMatrix:
    """[[1, m], [0, 1]]; acts on forms by b -> b + 2am."""
    return UnimodMatrix(1, m, 0, 1)


@dataclass(frozen=True)
class QuadForm:
    """Primitive positive definite binary quadratic form (a, b, c)."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if math.gcd(self.a, self.b, self.c) != 1:
            raise ValueError(f"form {self.triple()} is not primitive")
        if self.a <= 0 or self.b * self.b - 4 * self.a * self.c >= 0:
            raise ValueError(f"form {self.triple()} is not positive definite")

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def transform(self, g: UnimodMatrix) -> "QuadForm":
        """Right action: (Q.transform(g))(v) = Q(g*v).

        Satisfies Q.transform(g).transform(h) == Q.transform(g*h) and preserves
        the discriminant, primitivity and positive definiteness.
        """
        a2 = self(g.p, g.r)
        c2 = self(g.q, g.s)
        b2 = 2 * self.a * g.p * g.q + self.b * (g.p * g.s + g.q * g.r) + 2 * self.c * g.r * g.s
        return QuadForm(a2, b2, c2)

    def conjugate(self) -> "QuadForm":
        """(a, b, c) -> (a, -b, c); the form of the complex-conjugate root."""
        return QuadForm(self.a, -self.b, self.c)

    @staticmethod
    def principal(d: int) -> "QuadForm":
        """The form (1, b0, (b0^2 - d)/4) with b0 = d mod 2; its root lattice is the full order."""
        require_discriminant(d)
        b0 = d % 2
        return QuadForm(1, b0, (b0 * b0 - d) // 4)


@dataclass(frozen=True)
class SignedForm:
    """A positive definite carrier form plus a global sign.

    sign=-1 denotes the negated form -Q; the stored coefficients are always
    those of the positive definite carrier.
    """

    form: QuadForm
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +-1, got {self.sign}")

    def negate(self) -> "SignedForm":
        return SignedForm(self.form, -self.sign)

    def conjugate(self) -> "SignedForm":
        return SignedForm(self.form.conjugate(), self.sign)

    def transform(self, g: UnimodMatrix) -> "SignedForm":
        return SignedForm(self.form.transform(g), self.sign)

    def discriminant(self) -> int:
        return self.form.discriminant()

    def root(self) -> "QuadIrrational":
        """sign=+1: the root (-b + sqrt(D))/(2a) in the upper half-plane;
        sign=-1: its complex conjugate in the lower half-plane."""
        return QuadIrrational(-self.form.b, self.sign, self.form.discriminant(), 2 * self.form.a)

    def to_json(self) -> list[int]:
        """[a, b, c, s] with s = +-1."""
        return [self.form.a, self.form.b, self.form.c, self.sign]


def is_member(f: SignedForm, d: int, n: int) -> bool:
    """Whether f belongs to the discriminant-d family with leading coefficient prime to n.

    The carrier is primitive positive definite by construction, so the checks
    are the discriminant and gcd(a, n) = 1; the sign is irrelevant.
    """
    return f.discriminant() == d and math.gcd(f.form.a, n) == 1


@dataclass(frozen=True, eq=False)
class QuadIrrational:
    """Exact quadratic irrational (num + rad_coeff*sqrt(disc)) / den.

    disc < 0, den > 0 and rad_coeff is +1 (upper half-plane) or -1 (lower).
    The representation keeps the invariant den | num^2 - disc, which makes the
    Moebius action by integer matrices exact and closed (no rationals needed).
    Equality compares values, not representations: sqrt(-4)/2 equals sqrt(-1).
    """

    num: int
    rad_coeff: int
    disc: int
    den: int

    def __post_init__(self) -> None:
        if self.rad_coeff not in (1, -1):
            raise ValueError(f"rad_coeff must be +-1, got {self.rad_coeff}")
        require_discriminant(self.disc)
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if (self.num * self.num - self.disc) % self.den != 0:
            raise ValueError(f"den {self.den} does not divide num^2 - disc = {self.num * self.num - self.disc}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadIrrational):
            return NotImplemented
        return (
            self.rad_coeff == other.rad_coeff
            and self.num * other.den == other.num * self.den
            and self.disc * other.den * other.den == other.disc * self.den * self.den
        )

    def __hash__(self) -> int:
        return hash((
            Fraction(self.num, self.den),
            self.rad_coeff,
            Fraction(self.disc, self.den * self.den),
        ))

    def in_upper_half_plane(self) -> bool:
        return self.rad_coeff == 1

    def conjugate(self) -> "QuadIrrational":
        return QuadIrrational(self.num, -self.rad_coeff, self.disc, self.den)

    def mobius(self, g: UnimodMatrix) -> "QuadIrrational":
        """The fractional linear image (p*t + q)/(r*t + s), exactly.

        With t = (m + e*sqrt(D))/d, A = p*m + q*d and C = r*m + s*d:
            g(t) = ((A*C - p*r*D)/d + e*sqrt(D)) / ((C^2 - r^2*D)/d),
        and both divisions are exact because d | m^2 - D.
        """
        m, e, big_d, d = self.num, self.rad_coeff, self.disc, self.den
        a_top = g.p * m + g.q * d
        c_bot = g.r * m + g.s * d
        new_den = (c_bot * c_bot - g.r * g.r * big_d) // d
        new_num = (a_top * c_bot - g.p * g.r * big_d) // d
        return QuadIrrational(new_num, e, big_d, new_den)


def is_reduced(f: QuadForm) -> bool:
    """|b| <= a <= c, with b >= 0 when |b| = a or a = c."""
    a, b, c = f.triple()
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


@lru_cache(maxsize=None)
def reduce_form(f: QuadForm) -> tuple[QuadForm, UnimodMatrix]:
    """Gauss reduction.  Returns (R, g) with f.transform(g) == R and R reduced.

    Each SL2(Z) class contains exactly one reduced form, so R is a canonical
    class representative and g is an explicit equivalence witness.
    """
    g = IDENTITY
    while True:
        a, b, c = f.triple()
        if a > c or (a == c and b < 0):
            f, g = f.transform(SWAP), g * SWAP
            continue
        if not (-a < b <= a):
            # translate b into (-a, a]
            t = translation((a - b) // (2 * a))
            f, g = f.transform(t), g * t
            continue
        break
    return f, g


@lru_cache(maxsize=None)
def automorphs(f: QuadForm) -> tuple[UnimodMatrix, ...]:
    """All g with f.transform(g) == f.

    Built from the solutions of t^2 - D*u^2 = 4: the automorph
    [[(t - b*u)/2, -c*u], [a*u, (t + b*u)/2]] has determinant (t^2 - D*u^2)/4.
    Sizes: 2 for D < -4, 4 for D = -4, 6 for D = -3; always contains +-I.
    """
    a, b, c = f.triple()
    d = f.discriminant()
    out = []
    umax = math.isqrt(4 // -d) if -d <= 4 else 0
    for u in range(-umax, umax + 1):
        t_sq = 4 + d * u * u
        if t_sq < 0:
            continue
        t_root = math.isqrt(t_sq)
        if t_root * t_root != t_sq:
            continue
        for t in ({t_root, -t_root} if t_root else {0}):
            g = UnimodMatrix((t - b * u) // 2, -c * u, a * u, (t + b * u) // 2)
            if f.transform(g) == f:
                out.append(g)
    out.sort(key=UnimodMatrix.entries)
    assert IDENTITY in out and -IDENTITY in out
    return tuple(out)


def sl2_equivalent(f: QuadForm, g: QuadForm) -> UnimodMatrix | None:
    """A matrix w with f.transform(w) == g, or None if the forms are inequivalent.

    Raises ValueError on a discriminant mismatch (that is an input error, not
    inequivalence).  The full witness set is automorphs(f) * w.
    """
    if f.discriminant() != g.discriminant():
        raise ValueError(f"discriminant mismatch: {f.discriminant()} vs {g.discriminant()}")
    rf, wf = reduce_form(f)
    rg, wg = reduce_form(g)
    if rf != rg:
        return None
    w = wf * wg.inverse()
    assert f.transform(w) == g
    return w


@lru_cache(maxsize=None)
def reduced_forms(d: int) -> tuple[QuadForm, ...]:
    """All reduced primitive positive definite forms of discriminant d, sorted.

    The count is the classical form class number h(d).
    """
    require_discriminant(d)
    out = []
    a_max = math.isqrt(-d // 3)
    for a in range(1, a_max + 1):
        for b in range(-a, a + 1):
            if (b - d) % 2 != 0:
                continue
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            if math.gcd(a, b, c) != 1:
                continue
            out.append(QuadForm(a, b, c))
    out.sort(key=QuadForm.triple)
    return tuple(out)

"""Finite truncations of the projective limits: compatible point sequences
along divisibility chains of levels, matrix arithmetic at fixed prime-power
precision, the uniqueness property of truncated matrix limits (sharp at the
odd/even prime boundary), and the correspondence between base points times a
congruence kernel and point classes at higher level, checked exhaustively.

Everything runs on exact integers; "precision n" always means working modulo
p^n with determinant exactly 1 on integral lifts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from ._arith import egcd, is_prime
from .cm import CMPoint, cm_class_set, equivalent_points
from .congruence import CongKind, _class_invariant, cong_equivalent, lift_matrix
from .forms import IDENTITY, UnimodMatrix, require_discriminant


@dataclass(frozen=True)
class PadicMatrix:
    """[[a, b], [c, d]] modulo prime**precision, with det = 1 at that modulus."""

    prime: int
    precision: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        m = self.modulus()
        for entry in (self.a, self.b, self.c, self.d):
            if not 0 <= entry < m:
                raise ValueError("entries must be reduced to [0, modulus)")
        if (self.a * self.d - self.b * self.c) % m != 1:
            raise ValueError(f"determinant is not 1 mod {m}")

    def modulus(self) -> int:
        return self.prime**self.precision

    @staticmethod
    def identity(p: int, n: int) -> "PadicMatrix":
        return PadicMatrix(p, n, 1, 0, 0, 1)

    @staticmethod
    def from_unimod(g: UnimodMatrix, p: int, n: int) -> "PadicMatrix":
        m = p**n
        return PadicMatrix(p, n, g.p % m, g.q % m, g.r % m, g.s % m)

    def reduce_to(self, n: int) -> "PadicMatrix":
        if n > self.precision:
            raise ValueError(f"cannot raise precision {self.precision} to {n}")
        m = self.prime**n
        return PadicMatrix(self.prime, n, self.a % m, self.b % m, self.c % m, self.d % m)

    def __mul__(self, other: "PadicMatrix") -> "PadicMatrix":
        if (self.prime, self.precision) != (other.prime, other.precision):
            raise ValueError("mismatched prime or precision")
        m = self.modulus()
        return PadicMatrix(
            self.prime,
            self.precision,
            (self.a * other.a + self.b * other.c) % m,
            (self.a * other.b + self.b * other.d) % m,
            (self.c * other.a + self.d * other.c) % m,
            (self.c * other.b + self.d * other.d) % m,
        )

    def is_one_mod_p(self) -> bool:
        p = self.prime
        return (self.a % p, self.b % p, self.c % p, self.d % p) == (1, 0, 0, 1)

    def lift(self) -> UnimodMatrix:
        """A deterministic integral matrix of determinant exactly 1 in this residue class."""
        return lift_matrix(self.a, self.b, self.c, self.d, self.modulus())


@lru_cache(maxsize=None)
def kernel_reps(p: int, n: int) -> tuple[PadicMatrix, ...]:
    """All classes mod p^n that reduce to the identity mod p: count p^(3(n-1)).

    Closed form: a = 1 + p*al, b = p*be, c = p*ga range freely mod p^(n-1) and
    d is the unique solution of the determinant congruence, d = (1 + p^2*be*ga) * a^{-1}.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("precision must be >= 1")
    m, span = p**n, p ** (n - 1)
    out = []
    for al in range(span):
        a = 1 + p * al
        _, inv_a, _ = egcd(a, m)
        for be in range(span):
            for ga in range(span):
                d = ((1 + p * p * be * ga) * inv_a) % m
                out.append(PadicMatrix(p, n, a % m, (p * be) % m, (p * ga) % m, d))
    return tuple(out)


# -- truncated matrix sequences ----------------------------------------------


def _congruent(g: UnimodMatrix, h: UnimodMatrix, m: int) -> bool:
    return (g.p - h.p) % m == 0 and (g.q - h.q) % m == 0 and (g.r - h.r) % m == 0 and (g.s - h.s) % m == 0


@dataclass(frozen=True)
class MatrixSeq:
    """gamma_1..gamma_L in SL2(Z), meant to converge: gamma_{n+1} = gamma_n mod p^n
    and gamma_1 = I mod p.  Pass check=False to build a deliberately
    non-compliant sequence (the predicates always re-check from scratch)."""

    prime: int
    mats: tuple[UnimodMatrix, ...]
    check: bool = True

    def __post_init__(self) -> None:
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if not self.mats:
            raise ValueError("empty sequence")
        if self.check and not self.conditions_hold():
            raise ValueError("sequence violates the convergence conditions")

    def __len__(self) -> int:
        return len(self.mats)

    def conditions_hold(self) -> bool:
        """(i) successive terms agree mod p^n; (ii) the first term is I mod p."""
        if not _congruent(self.mats[0], IDENTITY, self.prime):
            return False
        return all(
            _congruent(self.mats[k + 1], self.mats[k], self.prime**(k + 1))
            for k in range(len(self.mats) - 1)
        )


def _same_shape(s: MatrixSeq, t: MatrixSeq) -> None:
    if s.prime != t.prime:
        raise ValueError("sequences at different primes")
    if len(s) != len(t):
        raise ValueError("sequences of different lengths")


def seq_conditions_hold(s: MatrixSeq, t: MatrixSeq) -> bool:
    """Both sequences converge-compatible, and termwise equal up to sign mod p^n."""
    _same_shape(s, t)
    if not (s.conditions_hold() and t.conditions_hold()):
        return False
    p = s.prime
    for k, (g, h) in enumerate(zip(s.mats, t.mats), start=1):
        m = p**k
        if not (_congruent(g, h, m) or _congruent(g, -h, m)):
            return False
    return True


def limits_agree(s: MatrixSeq, t: MatrixSeq) -> bool:
    """Exact termwise agreement mod p^n of two hypothesis-compliant sequences.

    For odd p this is forced (the sign ambiguity collapses); for p = 2 it can
    genuinely fail — the caller gets the honest answer either way.  ValueError
    if the pair does not satisfy the hypotheses.
    """
    if not seq_conditions_hold(s, t):
        raise ValueError("sequences do not satisfy the hypotheses")
    p = s.prime
    return all(_congruent(g, h, p**k) for k, (g, h) in enumerate(zip(s.mats, t.mats), start=1))


def _random_elem(modulus: int, rng: random.Random) -> UnimodMatrix:
    """A random element of the level-`modulus` principal congruence subgroup,
    as a short product of elementary unipotents (determinant exactly 1)."""
    out = IDENTITY
    for j in range(rng.randint(2, 3)):
        k = rng.randint(-3, 3)
        if j % 2 == 0:
            out = out * UnimodMatrix(1, k * modulus, 0, 1)
        else:
            out = out * UnimodMatrix(1, 0, k * modulus, 1)
    return out


def random_matrix_seq(p: int, length: int, rng: random.Random) -> MatrixSeq:
    """A random compliant sequence: each term perturbs the previous inside
    the matching principal congruence subgroup."""
    if length < 1:
        raise ValueError("length must be >= 1")
    mats = [_random_elem(p, rng)]
    for k in range(1, length):
        mats.append(mats[-1] * _random_elem(p**k, rng))
    return MatrixSeq(p, tuple(mats))


def random_compliant_pair(p: int, length: int, rng: random.Random) -> tuple[MatrixSeq, MatrixSeq, bool]:
    """(s, t, expected) with s, t jointly satisfying the hypotheses and
    `expected` the truth value limits_agree must return.

    t is built from s by in-class perturbation and a sign choice per term.
    For odd p every admissible sign is +1, so expected is always True; p = 2
    leaves the first two signs free and the limits disagree exactly when the
    persistent sign is -1.
    """
    s = random_matrix_seq(p, length, rng)
    if p == 2:
        signs = [rng.choice((1, -1))]
        if length > 1:
            persistent = rng.choice((1, -1))
            signs += [persistent] * (length - 1)
    else:
        signs = [1] * length
    mats = []
    for k, (g, e) in enumerate(zip(s.mats, signs), start=1):
        h = g * _random_elem(p**k, rng)
        mats.append(h if e == 1 else -h)
    t = MatrixSeq(p, tuple(mats))
    expected = p != 2 or length < 2 or signs[1] == 1
    return s, t, expected


# -- base points at an odd prime and the classes above them -------------------


@dataclass(frozen=True)
class BasePointSet:
    """One point per class of the full-congruence signed curve at a prime level."""

    prime: int
    disc: int
    reps: tuple[CMPoint, ...]


def base_point_set(p: int, d: int) -> BasePointSet:
    if not is_prime(p) or p == 2:
        raise ValueError(f"need an odd prime level, got {p}")
    require_discriminant(d)
    if d in (-3, -4):
        raise ValueError(f"discriminant {d} has extra units; the correspondence needs D < -4")
    reps = cm_class_set(d, p, "y").classes
    return BasePointSet(p, d, reps)


def act_padic(point: CMPoint, g: PadicMatrix, n: int, check_lift: bool = False) -> CMPoint:
    """Move a point by an integral lift of g taken mod prime**n.

    g must be trivial mod p (that is the domain of the correspondence) and
    carry at least n digits.  The class of the result at level prime**n does
    not depend on the lift; with check_lift a second, different lift is taken
    and the equivalence of the two images is asserted.
    """
    if not g.is_one_mod_p():
        raise ValueError("matrix is not trivial mod p")
    if g.precision < n:
        raise ValueError(f"matrix precision {g.precision} below requested level exponent {n}")
    m = g.prime**n
    gamma = g.reduce_to(n).lift()
    moved = CMPoint(point.carrier.transform(gamma))
    if check_lift:
        alt = gamma * UnimodMatrix(1, m, 0, 1)
        other = point.carrier.transform(alt)
        assert cong_equivalent(moved.carrier, other, m, CongKind.FULL_LEVEL) is not None
    return moved


def correspondence_report(p: int, d: int, n: int, check_lift: bool = False) -> dict:
    """Exhaustive check that (base point, kernel class) pairs hit pairwise
    distinct classes at level p^n, with the codomain enumerated independently.

    Returns a plain dict (JSON-ready): sizes of all three sets, the pair
    count, injectivity and surjectivity verdicts, and explicit witnesses for
    any failure instead of an exception.
    """
    base = base_point_set(p, d)
    kernel = kernel_reps(p, n)
    level = p**n
    codomain = cm_class_set(d, level, "y")

    # bucket images by a class invariant; only colliding buckets need the predicate
    buckets: dict[tuple, list[tuple[int, int, CMPoint]]] = {}
    for ri, r in enumerate(base.reps):
        for gi, g in enumerate(kernel):
            img = act_padic(r, g, n, check_lift=check_lift)
            key = (_class_invariant(img.carrier.form, level, CongKind.FULL_LEVEL), img.carrier.sign)
            buckets.setdefault(key, []).append((ri, gi, img))

    witnesses = []
    for got in buckets.values():
        for i in range(len(got)):
            for j in range(i + 1, len(got)):
                if equivalent_points(got[i][2], got[j][2], level, "y"):
                    witnesses.append({"first": [got[i][0], got[i][1]], "second": [got[j][0], got[j][1]]})
    pairs = len(base.reps) * len(kernel)
    injective = not witnesses
    codomain_size = len(codomain.classes)
    return {
        "p": p,
        "D": d,
        "n": n,
        "base_size": len(base.reps),
        "kernel_size": len(kernel),
        "codomain_size": codomain_size,
        "pairs": pairs,
        "injective": injective,
        "surjective": injective and pairs == codomain_size,
        "witnesses_of_failure": witnesses,
    }


# -- compatible sequences along level chains ----------------------------------


@dataclass(frozen=True)
class TowerElem:
    """One point class per level along a divisibility chain, each the image of
    the next under the level projection."""

    disc: int
    curve: str
    levels: tuple[int, ...]
    points: tuple[CMPoint, ...]

    def __post_init__(self) -> None:
        require_discriminant(self.disc)
        if self.curve not in ("y1", "y"):
            raise ValueError(f"curve must be 'y1' or 'y', got {self.curve!r}")
        if not self.levels or len(self.levels) != len(self.points):
            raise ValueError("need one point per level")
        if any(m < 1 for m in self.levels):
            raise ValueError("levels must be positive")
        for a, b in zip(self.levels, self.levels[1:]):
            if b % a:
                raise ValueError(f"levels must form a divisibility chain; {a} does not divide {b}")
        for lvl, pt in zip(self.levels, self.points):
            if pt.disc != self.disc:
                raise ValueError("point discriminant differs from the tower's")
            if not pt.primitive_mod(lvl):
                raise ValueError(f"point not primitive mod {lvl}")
        for k in range(len(self.levels) - 1):
            if not equivalent_points(self.points[k + 1], self.points[k], self.levels[k], self.curve):
                raise ValueError(f"incompatible at level {self.levels[k]}")

    def top(self) -> tuple[int, CMPoint]:
        return self.levels[-1], self.points[-1]


def extend_tower(t: TowerElem, m: int) -> TowerElem:
    """Append a class at level m restricting to the current top (fiber search).

    The projection is onto, so the search over enumerated level-m classes must
    succeed; exhaustion is reported as a hard error, not an empty result.
    """
    top_level, top_point = t.top()
    if m == top_level:
        return t
    if m % top_level:
        raise ValueError(f"{top_level} does not divide {m}")
    for q in cm_class_set(t.disc, m, t.curve).classes:
        if equivalent_points(q, top_point, top_level, t.curve):
            return TowerElem(t.disc, t.curve, t.levels + (m,), t.points + (q,))
    raise RuntimeError(f"no level-{m} class over the top class: projection failed to be onto")


def tower_from_base(base: CMPoint, levels: tuple[int, ...], curve: str) -> TowerElem:
    """Grow a compatible sequence over a base point along the whole chain."""
    if not levels:
        raise ValueError("empty chain")
    t = TowerElem(base.disc, curve, (levels[0],), (base,))
    for m in levels[1:]:
        t = extend_tower(t, m)
    return t


def tower_compose(s: TowerElem, t: TowerElem, bound: int = 10) -> TowerElem:
    """Levelwise signed-class product of two sequences on the same y1 chain.

    The constructor of the result re-verifies compatibility, so each call
    doubles as a check that composing commutes with the level projections.
    There is no counterpart on the full-congruence chain (no group law there).
    """
    from .classgroup import FormClass, PMClass, pm_compose
    from .forms import SignedForm

    if s.curve != "y1" or t.curve != "y1":
        raise ValueError("levelwise composition lives on the y1 chain only")
    if (s.disc, s.levels) != (t.disc, t.levels):
        raise ValueError("towers on different chains")
    pts = []
    for lvl, a, b in zip(s.levels, s.points, t.points):
        xa = PMClass(FormClass.of(a.carrier.form, lvl), a.carrier.sign)
        xb = PMClass(FormClass.of(b.carrier.form, lvl), b.carrier.sign)
        out = pm_compose(xa, xb, bound=bound)
        pts.append(CMPoint(SignedForm(out.base.rep, out.sign)))
    return TowerElem(s.disc, "y1", s.levels, tuple(pts))

"""Composition of form classes at a level, the resulting finite abelian group,
its signed (plus/minus) extension, and the transition maps between levels,
kinds, and orders.

Composition keeps the stricter level-N equivalence throughout: the second
factor is moved inside its own class (by a matrix that is unipotent upper
triangular mod N) until its leading coefficient is coprime to the first
factor's, after which the two forms share a middle coefficient by CRT and
multiply like the ideals they correspond to.  Inverses and the ideal-to-class
map go through the exact ray-class predicate rather than any closed formula:
the conjugate class is NOT the inverse once N > 1, because the rational
factor (1/a) it introduces is itself generally nontrivial at level N.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from ._arith import crt, egcd, factorize
from .congruence import CongKind, class_index, cong_equivalent
from .forms import QuadForm, SignedForm, UnimodMatrix, require_discriminant
from .ideals import OIdeal, extend_to_order, form_to_ideal, ray_class_count, ray_class_equal


class CompositionBoundError(RuntimeError):
    """The bounded search for a concordant representative pair came up empty."""


class GroupAxiomError(RuntimeError):
    """A built multiplication table failed a group-law or order check."""


@dataclass(frozen=True)
class FormClass:
    """The level-N class of a form, named by one representative."""

    rep: QuadForm
    disc: int
    level: int

    def __post_init__(self) -> None:
        require_discriminant(self.disc)
        if self.rep.discriminant() != self.disc:
            raise ValueError(f"representative has discriminant {self.rep.discriminant()}, not {self.disc}")
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if math.gcd(self.rep.a, self.level) != 1:
            raise ValueError(f"leading coefficient {self.rep.a} not coprime to level {self.level}")

    @staticmethod
    def of(f: QuadForm, level: int) -> "FormClass":
        return FormClass(f, f.discriminant(), level)


def identity_class(d: int, n: int) -> FormClass:
    return FormClass.of(QuadForm.principal(d), n)


def same_class(x: FormClass, y: FormClass) -> bool:
    if (x.disc, x.level) != (y.disc, y.level):
        raise ValueError("classes live at different discriminant/level")
    return cong_equivalent(SignedForm(x.rep), SignedForm(y.rep), x.level, CongKind.UPPER_UNIPOTENT) is not None


def conj_class(x: FormClass) -> FormClass:
    """(a, b, c) -> (a, -b, c) descends to classes; an automorphism, not the inverse."""
    return FormClass(x.rep.conjugate(), x.disc, x.level)


def _column_shells(n: int, bound: int):
    """Candidate first columns (p, r) with p = 1, r = 0 mod n, nearest first."""
    for shell in range(bound + 1):
        for kp in range(-shell, shell + 1):
            for kr in range(-shell, shell + 1):
                if max(abs(kp), abs(kr)) == shell:
                    yield 1 + kp * n, kr * n


def compose(x: FormClass, y: FormClass, bound: int = 10, rng: random.Random | None = None) -> FormClass:
    """The class product, via a concordant pair of representatives.

    Moves y by gamma = [[p, -v], [r, u]] (unipotent upper triangular mod N,
    built from any coprime column p = 1, r = 0 mod N with gcd(a_x, Q_y(p, r))
    = 1), then glues the middle coefficients by CRT.  The result class does
    not depend on the chosen column; passing rng picks among the first few
    admissible columns at random, which is how the independence is tested.
    """
    if (x.disc, x.level) != (y.disc, y.level):
        raise ValueError("classes live at different discriminant/level")
    d, n = x.disc, x.level
    ax = x.rep.a

    hits: list[tuple[int, int]] = []
    for p, r in _column_shells(n, bound):
        g, u, v = egcd(p, r)
        if g != 1:
            continue
        if math.gcd(ax, y.rep(p, r)) != 1:
            continue
        hits.append((p, r))
        if rng is None or len(hits) >= 4:
            break
    if not hits:
        raise CompositionBoundError(
            f"no concordant column for {x.rep.triple()} * {y.rep.triple()} at level {n} within bound {bound}"
        )
    p, r = hits[0] if rng is None else rng.choice(hits)

    g, u, v = egcd(p, r)
    gamma = UnimodMatrix(p, -v, r, u)
    moved = y.rep.transform(gamma)
    big_b, modulus = crt(x.rep.b, 2 * ax, moved.b, 2 * moved.a)
    m = ax * moved.a
    assert modulus == 2 * m
    if big_b > m:
        big_b -= 2 * m
    return FormClass(QuadForm(m, big_b, (big_b * big_b - d) // (4 * m)), d, n)


def class_of_ideal(u: OIdeal, d: int, n: int) -> FormClass:
    """The unique enumerated class whose ideal is ray-equal to u at modulus n.

    LookupError if no class matches (u must be invertible-prime to n, else
    ValueError).  Exactly-one is asserted: more than one match would break
    the class/ideal dictionary itself.
    """
    idx = class_index(d, n, CongKind.UPPER_UNIPOTENT, signed=False)
    matches = [
        i for i, rep in enumerate(idx.reps)
        if ray_class_equal(u, form_to_ideal(rep.form), n)
    ]
    if not matches:
        raise LookupError(f"no class at disc {d}, level {n} matches ideal {u.to_json()}")
    assert len(matches) == 1, f"ideal {u.to_json()} matched classes {matches}"
    return FormClass(idx.reps[matches[0]].form, d, n)


def inverse_class(x: FormClass) -> FormClass:
    """The group inverse, through the ideal dictionary (see module docstring)."""
    return class_of_ideal(form_to_ideal(x.rep).inverse(), x.disc, x.level)


# -- the full group ----------------------------------------------------------


def _abelian_invariants(order: int, identity: int, power) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group.

    Uses only the black-box power map: for each prime p the sizes of the
    p^k-torsion subgroups determine the partition of exponents, and aligning
    the partitions across primes (largest with largest) gives the factors.
    """
    if order == 1:
        return ()
    partitions: dict[int, list[int]] = {}
    for p in factorize(order):
        sizes = [1]
        while True:
            k = len(sizes)
            size = sum(1 for i in range(order) if power(i, p**k) == identity)
            if size == sizes[-1]:
                break
            sizes.append(size)
        torsion_logs = []
        for s in sizes:
            v = 0
            while s % p == 0:
                s //= p
                v += 1
            assert s == 1, "torsion subgroup size is not a prime power"
            torsion_logs.append(v)
        # mu_k = #{j : lambda_j >= k}; conjugating recovers the exponents
        mu = [torsion_logs[k] - torsion_logs[k - 1] for k in range(1, len(torsion_logs))]
        lam = [sum(1 for m in mu if m >= j + 1) for j in range(max(mu))]
        partitions[p] = lam
    width = max(len(lam) for lam in partitions.values())
    factors = []
    for j in range(width):
        f = 1
        for p, lam in partitions.items():
            if j < len(lam):
                f *= p ** lam[j]
        factors.append(f)
    factors.reverse()
    assert math.prod(factors) == order
    return tuple(factors)


@dataclass(frozen=True)
class ClassGroupTable:
    """Dense multiplication table over the enumerated classes at (disc, level)."""

    disc: int
    level: int
    classes: tuple[FormClass, ...]
    cayley: tuple[tuple[int, ...], ...]
    identity_index: int

    # how many triples get the full associativity sweep before sampling kicks in
    _ASSOC_FULL_LIMIT = 3_000_000

    @property
    def order(self) -> int:
        return len(self.classes)

    @staticmethod
    def build(d: int, n: int, bound: int = 10) -> "ClassGroupTable":
        idx = class_index(d, n, CongKind.UPPER_UNIPOTENT, signed=False)
        classes = tuple(FormClass(rep.form, d, n) for rep in idx.reps)
        size = len(classes)
        expected = ray_class_count(d, n)
        if size != expected:
            raise GroupAxiomError(f"enumerated {size} classes at ({d}, {n}); order formula says {expected}")
        rows = []
        for x in classes:
            row = [idx.locate(SignedForm(compose(x, y, bound=bound).rep)) for y in classes]
            rows.append(tuple(row))
        cayley = tuple(rows)
        identity = idx.locate(SignedForm(QuadForm.principal(d)))
        table = ClassGroupTable(d, n, classes, cayley, identity)
        table._validate()
        return table

    def _validate(self) -> None:
        n, e, t = self.order, self.identity_index, self.cayley
        for i in range(n):
            if t[e][i] != i or t[i][e] != i:
                raise GroupAxiomError(f"index {e} is not an identity")
        full = set(range(n))
        for i in range(n):
            if set(t[i]) != full or {t[j][i] for j in range(n)} != full:
                raise GroupAxiomError(f"row/column {i} is not a permutation")
            if e not in t[i]:
                raise GroupAxiomError(f"element {i} has no inverse")
        for i in range(n):
            for j in range(i + 1, n):
                if t[i][j] != t[j][i]:
                    raise GroupAxiomError(f"products {i}*{j} and {j}*{i} differ")
        if n**3 <= self._ASSOC_FULL_LIMIT:
            triples = ((i, j, k) for i in range(n) for j in range(n) for k in range(n))
        else:
            pick = random.Random(0)
            triples = ((pick.randrange(n), pick.randrange(n), pick.randrange(n)) for _ in range(200_000))
        for i, j, k in triples:
            if t[t[i][j]][k] != t[i][t[j][k]]:
                raise GroupAxiomError(f"associativity fails at ({i}, {j}, {k})")

    def mul(self, i: int, j: int) -> int:
        return self.cayley[i][j]

    def inverse_index(self, i: int) -> int:
        return self.cayley[i].index(self.identity_index)

    def power(self, i: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse_index(i), -k)
        acc, base = self.identity_index, i
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def element_order(self, i: int) -> int:
        k, acc = 1, i
        while acc != self.identity_index:
            acc = self.mul(acc, i)
            k += 1
        return k

    def locate_class(self, x: FormClass) -> int:
        if (x.disc, x.level) != (self.disc, self.level):
            raise ValueError("class belongs to a different group")
        idx = class_index(self.disc, self.level, CongKind.UPPER_UNIPOTENT, signed=False)
        return idx.locate(SignedForm(x.rep))

    def invariant_factors(self) -> tuple[int, ...]:
        return _abelian_invariants(self.order, self.identity_index, self.power)

    def to_json(self) -> dict:
        return {
            "D": self.disc,
            "N": self.level,
            "order": self.order,
            "reps": [list(x.rep.triple()) for x in self.classes],
            "cayley": [list(row) for row in self.cayley],
            "invariant_factors": list(self.invariant_factors()),
        }


@lru_cache(maxsize=None)
def class_group_table(d: int, n: int) -> ClassGroupTable:
    return ClassGroupTable.build(d, n)


# -- transition maps ---------------------------------------------------------


def level_map(x, m: int, n: int):
    """Reinterpret a level-m class at a coarser level n (n | m); rep unchanged.

    Accepts a FormClass or a bare signed form standing for its stricter
    (full-congruence) class.
    """
    if n < 1 or m % n:
        raise ValueError(f"target level {n} must divide source level {m}")
    if isinstance(x, FormClass):
        if x.level != m:
            raise ValueError(f"class has level {x.level}, not {m}")
        return FormClass(x.rep, x.disc, n)
    if isinstance(x, SignedForm):
        return x
    raise TypeError(f"cannot level-map {type(x).__name__}")


def class_surjection(
    d: int,
    m: int,
    n: int,
    src_kind: CongKind,
    dst_kind: CongKind,
    signed: bool = False,
) -> tuple[int, ...]:
    """Index map of the class surjection (src_kind, m) -> (dst_kind, n).

    Defined when n | m and the source subgroup sits inside the target one,
    i.e. the source is full-congruence or the target is the unipotent kind.
    Each source representative is located in the target enumeration;
    surjectivity is asserted.
    """
    if n < 1 or m % n:
        raise ValueError(f"target level {n} must divide source level {m}")
    if not (src_kind == CongKind.FULL_LEVEL or dst_kind == CongKind.UPPER_UNIPOTENT):
        raise ValueError(f"no containment from {src_kind.value} at {m} into {dst_kind.value} at {n}")
    src = class_index(d, m, src_kind, signed)
    dst = class_index(d, n, dst_kind, signed)
    out = tuple(dst.locate(rep) for rep in src.reps)
    assert set(out) == set(range(len(dst.reps))), "transition map failed to be surjective"
    return out


def order_change_map(x: FormClass, target_disc: int) -> FormClass:
    """Push a class to a smaller-conductor order (disc l1^2*d -> l2^2*d, l2 | l1).

    Extends the representative's ideal to the target order and reads off its
    class at the same level; ValueError if the extended ideal is not prime to
    the level.
    """
    ext = extend_to_order(form_to_ideal(x.rep), target_disc)
    return class_of_ideal(ext, target_disc, x.level)


# -- the signed (plus/minus) extension ---------------------------------------


@dataclass(frozen=True)
class PMClass:
    """A form class together with a half-plane sign."""

    base: FormClass
    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


def pm_identity(d: int, n: int) -> PMClass:
    return PMClass(identity_class(d, n), 1)


def pm_compose(x: PMClass, y: PMClass, bound: int = 10) -> PMClass:
    """Semidirect rule: a minus on the left conjugates the right factor."""
    if x.sign == 1:
        return PMClass(compose(x.base, y.base, bound=bound), y.sign)
    return PMClass(compose(x.base, conj_class(y.base), bound=bound), -y.sign)


def pm_inverse(x: PMClass) -> PMClass:
    if x.sign == 1:
        return PMClass(inverse_class(x.base), 1)
    return PMClass(conj_class(inverse_class(x.base)), -1)


@dataclass(frozen=True)
class PMGroup:
    """Dense table for the signed extension: indices [0, n) are the plus coset
    in base-table order, [n, 2n) the minus coset."""

    base: ClassGroupTable
    conj_perm: tuple[int, ...]
    cayley: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return 2 * self.base.order

    @property
    def identity_index(self) -> int:
        return self.base.identity_index

    @staticmethod
    def build(base: ClassGroupTable) -> "PMGroup":
        n = base.order
        conj = tuple(base.locate_class(conj_class(x)) for x in base.classes)
        rows = []
        for a in range(2 * n):
            ia, plus_a = a % n, a < n
            row = []
            for b in range(2 * n):
                ib, plus_b = b % n, b < n
                k = base.mul(ia, ib) if plus_a else base.mul(ia, conj[ib])
                row.append(k if plus_a == plus_b else k + n)
            rows.append(tuple(row))
        group = PMGroup(base, conj, tuple(rows))
        group._validate()
        return group

    def _validate(self) -> None:
        n2, e, t = self.order, self.identity_index, self.cayley
        n = self.base.order
        for i in range(n2):
            if t[e][i] != i or t[i][e] != i:
                raise GroupAxiomError(f"index {e} is not an identity")
        full = set(range(n2))
        for i in range(n2):
            if set(t[i]) != full or {t[j][i] for j in range(n2)} != full:
                raise GroupAxiomError(f"row/column {i} is not a permutation")
        for i in range(n):
            for j in range(n):
                if t[i][j] != self.base.cayley[i][j]:
                    raise GroupAxiomError("plus coset does not restrict to the base table")
        if n2**3 <= ClassGroupTable._ASSOC_FULL_LIMIT:
            triples = ((i, j, k) for i in range(n2) for j in range(n2) for k in range(n2))
        else:
            pick = random.Random(0)
            triples = ((pick.randrange(n2), pick.randrange(n2), pick.randrange(n2)) for _ in range(200_000))
        for i, j, k in triples:
            if t[t[i][j]][k] != t[i][t[j][k]]:
                raise GroupAxiomError(f"associativity fails at ({i}, {j}, {k})")
        flip = n + e
        if t[flip][flip] != e:
            raise GroupAxiomError("the minus-identity is not an involution")
        for i in range(n2):
            # conjugating by the involution must apply the conjugate map, coset kept
            expected = self.conj_perm[i % n] + (0 if i < n else n)
            if t[flip][t[i][flip]] != expected:
                raise GroupAxiomError(f"conjugation by the involution fails at {i}")

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inverse_index(self, a: int) -> int:
        return self.cayley[a].index(self.identity_index)

    def element_order(self, a: int) -> int:
        k, acc = 1, a
        while acc != self.identity_index:
            acc = self.mul(acc, a)
            k += 1
        return k

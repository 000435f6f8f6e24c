"""Congruence subgroups of SL2(Z) and class enumeration of forms under them.

Two families are supported: the principal subgroup of level N (matrices
congruent to the identity mod N) and the upper-unipotent family (diagonal
congruent to 1, lower-left to 0 mod N, upper-right free).  The module decides
membership and equivalence with explicit witnesses, enumerates coset
representatives by lifting SL2(Z/N), and enumerates equivalence classes of
signed forms exhaustively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from ._arith import egcd
from .forms import (
    QuadForm,
    SignedForm,
    UnimodMatrix,
    automorphs,
    is_member,
    reduce_form,
    reduced_forms,
    require_discriminant,
    sl2_equivalent,
)


class CongKind(Enum):
    """Which congruence subgroup a level refers to."""

    FULL_LEVEL = "full"          # g = I mod N
    UPPER_UNIPOTENT = "gamma1"   # diag = 1, lower-left = 0 mod N


def in_gamma(g: UnimodMatrix, n: int, kind: CongKind) -> bool:
    if n < 1:
        raise ValueError("level must be >= 1")
    if (g.p - 1) % n or g.r % n or (g.s - 1) % n:
        return False
    return kind is CongKind.UPPER_UNIPOTENT or g.q % n == 0


@lru_cache(maxsize=None)
def sl2_residues(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """All (p, q, r, s) over Z/n with p*s - q*r = 1 mod n."""
    if n < 1:
        raise ValueError("level must be >= 1")
    if n == 1:
        return ((0, 0, 0, 0),)
    out = []
    for p in range(n):
        g = math.gcd(p, n)
        for q in range(n):
            for r in range(n):
                target = 1 + q * r
                if target % g:
                    continue
                # p*s = target (mod n) has g solutions, spaced n/g apart
                _, u, _ = egcd(p, n)
                s0 = (u * (target // g)) % (n // g)
                for k in range(g):
                    out.append((p, q, r, s0 + k * (n // g)))
    return tuple(out)


def lift_matrix(p: int, q: int, r: int, s: int, n: int) -> UnimodMatrix:
    """An SL2(Z) matrix congruent to (p, q, r, s) mod n.

    Deterministic: fix an integer bottom row congruent to (r, s) with coprime
    entries, complete it by the extended gcd, then correct the top row by the
    unique translate matching (p, q) mod n.
    """
    if n == 1:
        return UnimodMatrix.identity()
    if (p * s - q * r) % n != 1:
        raise ValueError(f"({p},{q},{r},{s}) is not unimodular mod {n}")
    rr = r % n
    ss = s % n
    if rr == 0:
        rr = n
    while math.gcd(rr, ss) != 1:
        ss += n
    _, u, v = egcd(rr, ss)
    # det [[v, -u], [rr, ss]] = v*ss + u*rr = 1
    p0, q0 = v, -u
    t = (u * (p - p0) + v * (q - q0)) % n
    lifted = UnimodMatrix(p0 + t * rr, q0 + t * ss, rr, ss)
    assert (lifted.p - p) % n == 0 and (lifted.q - q) % n == 0
    assert (lifted.r - r) % n == 0 and (lifted.s - s) % n == 0
    return lifted


@lru_cache(maxsize=None)
def coset_reps(n: int, kind: CongKind) -> tuple[UnimodMatrix, ...]:
    """Representatives g0 of the left cosets g0*Gamma in SL2(Z).

    For the principal subgroup these biject with SL2(Z/n).  For the
    upper-unipotent family they biject with SL2(Z/n) modulo right
    multiplication by unipotents [[1, k], [0, 1]]; each orbit is collapsed to
    its lexicographically least tuple before lifting, so the output is
    deterministic.
    """
    residues = sl2_residues(n)
    if kind is CongKind.FULL_LEVEL or n == 1:
        return tuple(lift_matrix(*t, n) for t in residues)
    chosen = set()
    for p, q, r, s in residues:
        orbit_min = min(((p, (q + k * p) % n, r, (s + k * r) % n) for k in range(n)))
        chosen.add(orbit_min)
    return tuple(lift_matrix(*t, n) for t in sorted(chosen))


def cong_equivalent(f: SignedForm, g: SignedForm, n: int, kind: CongKind) -> UnimodMatrix | None:
    """A witness w in the subgroup with f.transform(w) == g, or None.

    The full SL2(Z) witness set is automorphs * w0 for any single witness w0,
    and it is finite, so membership of the class is decided exactly by testing
    each element.  Discriminant or membership violations raise ValueError.
    """
    d = f.discriminant()
    if g.discriminant() != d:
        raise ValueError(f"discriminant mismatch: {d} vs {g.discriminant()}")
    if not is_member(f, d, n) or not is_member(g, d, n):
        raise ValueError(f"forms must have leading coefficient prime to {n}")
    if f.sign != g.sign:
        return None
    w0 = sl2_equivalent(f.form, g.form)
    if w0 is None:
        return None
    for alpha in automorphs(f.form):
        w = alpha * w0
        if in_gamma(w, n, kind):
            assert f.transform(w) == g
            return w
    return None


def _class_invariant(form: QuadForm, n: int, kind: CongKind) -> tuple:
    """A tuple constant on equivalence classes; used only as a negative filter.

    The leading coefficient mod n is class-constant for both kinds; for the
    principal subgroup all three coefficients are.  The reduced representative
    pins the SL2(Z) class.
    """
    reduced, _ = reduce_form(form)
    if kind is CongKind.FULL_LEVEL:
        return (form.a % n, form.b % n, form.c % n, reduced.triple())
    return (form.a % n, reduced.triple())


@lru_cache(maxsize=None)
def unsigned_class_reps(d: int, n: int, kind: CongKind) -> tuple[QuadForm, ...]:
    """One representative per unsigned class, deterministically ordered.

    Candidates are the reduced forms pushed through all coset representatives;
    every class is hit because a witness factors as (coset rep) * (subgroup
    element).  Candidates whose leading coefficient shares a factor with n are
    discarded (that property is class-constant).  Deduplication buckets by the
    class invariant and decides equality only with cong_equivalent.
    """
    require_discriminant(d)
    candidates = set()
    for base in reduced_forms(d):
        for g0 in coset_reps(n, kind):
            cand = base.transform(g0)
            if math.gcd(cand.a, n) == 1:
                candidates.add(cand)
    buckets: dict[tuple, list[QuadForm]] = {}
    reps = []
    for cand in sorted(candidates, key=QuadForm.triple):
        key = _class_invariant(cand, n, kind)
        bucket = buckets.setdefault(key, [])
        signed = SignedForm(cand)
        if not any(cong_equivalent(SignedForm(kept), signed, n, kind) for kept in bucket):
            bucket.append(cand)
            reps.append(cand)
    return tuple(reps)


def enumerate_classes(d: int, n: int, kind: CongKind, signed: bool = False) -> tuple[SignedForm, ...]:
    """One representative per class of forms (signed forms if requested).

    The group action preserves the sign, so the signed classes are the
    unsigned ones with each sign; positives are listed first.
    """
    unsigned = unsigned_class_reps(d, n, kind)
    reps = [SignedForm(q) for q in unsigned]
    if signed:
        reps += [SignedForm(q, -1) for q in unsigned]
    return tuple(reps)


@dataclass(frozen=True)
class ClassIndex:
    """A frozen class list with exact membership lookup."""

    disc: int
    level: int
    kind: CongKind
    signed: bool
    reps: tuple[SignedForm, ...]
    _buckets: dict[tuple, tuple[int, ...]]

    def locate(self, f: SignedForm) -> int:
        """Index of the class of f among reps; LookupError if f is not a member."""
        if not is_member(f, self.disc, self.level):
            raise LookupError(f"{f.to_json()} is not in the discriminant-{self.disc} level-{self.level} family")
        key = (_class_invariant(f.form, self.level, self.kind), f.sign)
        for i in self._buckets.get(key, ()):
            if cong_equivalent(self.reps[i], f, self.level, self.kind) is not None:
                return i
        raise LookupError(f"no enumerated class matches {f.to_json()}")


@lru_cache(maxsize=None)
def class_index(d: int, n: int, kind: CongKind, signed: bool = False) -> ClassIndex:
    reps = enumerate_classes(d, n, kind, signed)
    buckets: dict[tuple, list[int]] = {}
    for i, rep in enumerate(reps):
        key = (_class_invariant(rep.form, n, kind), rep.sign)
        buckets.setdefault(key, []).append(i)
    frozen = {k: tuple(v) for k, v in buckets.items()}
    return ClassIndex(d, n, kind, signed, reps, frozen)

"""Reduction, the right action, and roots — checked against brute-force oracles."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formclass.forms import (
    IDENTITY,
    QuadForm,
    QuadIrrational,
    SignedForm,
    UnimodMatrix,
    automorphs,
    is_discriminant,
    is_reduced,
    reduce_form,
    reduced_forms,
    require_discriminant,
    sl2_equivalent,
    translation,
)

SAMPLE_DISCS = (-3, -4, -15, -20, -23, -24, -47, -71, -92)

# independently known class numbers for the fundamental sample discriminants
CLASS_NUMBERS = {-3: 1, -4: 1, -15: 2, -20: 2, -23: 3, -24: 2, -47: 5, -71: 7}


def brute_reduced(d: int) -> set[tuple[int, int, int]]:
    """All primitive reduced positive definite forms of discriminant d, by
    direct scan: |b| <= a <= c, b^2 - 4ac = d, b >= 0 when |b| = a or a = c."""
    out = set()
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or math.gcd(a, b, c) != 1:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            out.add((a, b, c))
        a += 1
    return out


# -- hypothesis strategies ----------------------------------------------------

small_entries = st.integers(min_value=-4, max_value=4)


@st.composite
def unimod(draw):
    """A word of length <= 4 in elementary unipotents — covers a healthy chunk
    of SL2(Z) with bounded entries."""
    g = IDENTITY
    for i in range(draw(st.integers(min_value=1, max_value=4))):
        k = draw(small_entries)
        g = g * (UnimodMatrix(1, k, 0, 1) if i % 2 else UnimodMatrix(1, 0, k, 1))
    return g


@st.composite
def definite_form(draw):
    d = draw(st.sampled_from(SAMPLE_DISCS))
    f = draw(st.sampled_from(reduced_forms(d)))
    return f.transform(draw(unimod()))


# -- discriminants and constructors --------------------------------------------


def test_discriminant_gate():
    assert require_discriminant(-23) == -23
    assert require_discriminant(-4) == -4
    for bad in (0, 5, -1, -2, -10):
        assert not is_discriminant(bad)
        with pytest.raises(ValueError):
            require_discriminant(bad)


def test_form_constructor_rejects_indefinite():
    with pytest.raises(ValueError):
        QuadForm(1, 3, 1)  # discriminant +5
    with pytest.raises(ValueError):
        QuadForm(-1, 1, -6)  # negative definite carrier not allowed
    with pytest.raises(ValueError):
        QuadForm(0, 1, 1)


def test_unimod_determinant_checked():
    with pytest.raises(ValueError):
        UnimodMatrix(1, 0, 0, 2)
    with pytest.raises(ValueError):
        UnimodMatrix(2, 0, 0, 2)


def test_matrix_group_ops():
    g = UnimodMatrix(2, 1, 1, 1)
    assert g * g.inverse() == IDENTITY
    assert g.inverse() * g == IDENTITY
    assert (-g).entries() == (-2, -1, -1, -1)
    assert translation(3) == UnimodMatrix(1, 3, 0, 1)
    assert g.to_json() == [2, 1, 1, 1]


# -- reduction against the brute-force oracle ----------------------------------


@pytest.mark.parametrize("d", SAMPLE_DISCS)
def test_reduced_forms_match_brute_scan(d):
    got = {f.triple() for f in reduced_forms(d)}
    assert got == brute_reduced(d)


@pytest.mark.parametrize("d,h", sorted(CLASS_NUMBERS.items()))
def test_class_numbers(d, h):
    assert len(reduced_forms(d)) == h


def test_reduce_witness_is_exact():
    f = QuadForm(7, 11, 5)
    red, w = reduce_form(f)
    assert red.triple() == (1, 1, 5)
    assert f.transform(w) == red
    assert is_reduced(red)


@given(definite_form())
@settings(max_examples=120, deadline=None)
def test_reduce_idempotent_with_witness(f):
    red, w = reduce_form(f)
    assert is_reduced(red)
    assert f.transform(w) == red
    again, w2 = reduce_form(red)
    assert again == red and w2 == IDENTITY


# -- the right action -----------------------------------------------------------


@given(definite_form(), unimod(), unimod())
@settings(max_examples=120, deadline=None)
def test_action_composes_on_the_right(f, g, h):
    assert f.transform(g).transform(h) == f.transform(g * h)


@given(definite_form())
@settings(max_examples=60, deadline=None)
def test_action_identity_and_inverse(f):
    assert f.transform(IDENTITY) == f
    g = UnimodMatrix(2, 1, 1, 1)
    assert f.transform(g).transform(g.inverse()) == f


@given(definite_form(), unimod())
@settings(max_examples=120, deadline=None)
def test_action_preserves_disc_and_values(f, g):
    moved = f.transform(g)
    assert moved.discriminant() == f.discriminant()
    # values are permuted along the column map: moved(x, y) = f(px + qy, rx + sy)
    p, q, r, s = g.entries()
    for x, y in ((1, 0), (0, 1), (1, 1), (2, -3)):
        assert moved(x, y) == f(p * x + q * y, r * x + s * y)


@given(definite_form(), unimod())
@settings(max_examples=100, deadline=None)
def test_root_transforms_by_inverse_mobius(f, g):
    sf = SignedForm(f)
    assert sf.transform(g).root() == sf.root().mobius(g.inverse())


def test_automorph_counts():
    assert len(automorphs(QuadForm.principal(-3))) == 6
    assert len(automorphs(QuadForm.principal(-4))) == 4
    for d in (-15, -23, -47):
        for f in reduced_forms(d):
            assert len(automorphs(f)) == 2


def test_automorphs_fix_the_form():
    for d in (-3, -4, -23):
        for f in reduced_forms(d):
            for g in automorphs(f):
                assert f.transform(g) == f


# -- plain equivalence ------------------------------------------------------------


def test_sl2_equivalent_roundtrip():
    f = QuadForm(2, 1, 3)
    g = f.transform(UnimodMatrix(2, 1, 1, 1))
    w = sl2_equivalent(f, g)
    assert w is not None and f.transform(w) == g


def test_sl2_inequivalent_distinct_reduced():
    reps = reduced_forms(-23)
    for i, f in enumerate(reps):
        for j, g in enumerate(reps):
            assert (sl2_equivalent(f, g) is not None) == (i == j)


def test_conjugate_form_is_inverse_class_at_level_one():
    f = QuadForm(2, 1, 3)
    assert f.conjugate().triple() == (2, -1, 3)
    # (2,1,3) and (2,-1,3) are the two non-principal classes of -23
    assert sl2_equivalent(f, f.conjugate()) is None


# -- roots ------------------------------------------------------------------------


def test_root_is_actual_zero():
    f = QuadForm(2, 1, 3)
    t = SignedForm(f).root()
    # a*t^2 + b*t + c = 0 for t = (-b + sqrt(D)) / 2a, checked exactly:
    # substitute t = (num + rad*sqrt(D)) / den and clear denominators.
    num, rad, d, den = t.num, t.rad_coeff, t.disc, t.den
    # 2*2*t = (-1 + sqrt(-23)) => num=-1, rad=1, den=4
    a, b, c = f.triple()
    # rational and irrational parts of a*t^2 + b*t + c (times den^2)
    rational = a * (num * num + rad * rad * d) + b * num * den + c * den * den
    irrational = 2 * a * num * rad + b * rad * den
    assert rational == 0 and irrational == 0


def test_root_halfplane_tracks_sign():
    f = QuadForm(2, 1, 3)
    assert SignedForm(f, 1).root().in_upper_half_plane()
    assert not SignedForm(f, -1).root().in_upper_half_plane()


def test_quad_irrational_value_equality():
    a = QuadIrrational(-1, 1, -23, 4)
    b = QuadIrrational(-2, 1, -92, 8)  # same value via sqrt(-92) = 2*sqrt(-23)
    assert a == b and hash(a) == hash(b)
    assert a != QuadIrrational(1, 1, -23, 4)
    assert a != a.conjugate()
    assert a.conjugate().conjugate() == a


def test_signed_form_sign_validation():
    with pytest.raises(ValueError):
        SignedForm(QuadForm(1, 0, 1), 2)

from __future__ import annotations

from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilvhs.errors import InvalidAction, InvalidInput
from weilvhs.linalg import ExactMatrix
from weilvhs.qfield import (CMField, E0Element, Embedding, TotallyRealField, eigenspace_decompose,
                            is_square_in_E0, is_squarefree, norm_E_over_E0, rational_sqrt,
                            sign_at_embedding, trace_to_subfield)

getcontext().prec = 60

SMALL_M = [2, 3, 5, 6, 7, 10, 13]
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def e0_elements(draw, m=None):
    m = draw(st.sampled_from(SMALL_M)) if m is None else m
    return E0Element(draw(rationals), draw(rationals), m)


def decimal_value(x: E0Element, emb: Embedding) -> Decimal:
    a = Decimal(x.a.numerator) / Decimal(x.a.denominator)
    b = Decimal(x.b.numerator) / Decimal(x.b.denominator)
    return a + emb.sqrtm_sign * b * Decimal(x.m).sqrt()


def test_squarefree():
    assert [k for k in range(1, 20) if is_squarefree(k)] == [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None
    assert rational_sqrt(0) == 0


def test_field_construction_rejects_bad_input():
    with pytest.raises(InvalidInput):
        TotallyRealField(4)
    with pytest.raises(InvalidInput):
        TotallyRealField(1)
    with pytest.raises(InvalidInput):
        CMField.over(TotallyRealField(None), -1)
    # 1 - sqrt2 is negative at sigma_1
    base = TotallyRealField(2)
    with pytest.raises(InvalidInput):
        CMField.over(base, base.element(1, 1) - 2 * base.element(0, 1))
    with pytest.raises(InvalidInput):
        Embedding(1, -1)


def test_totally_positive_irrational_e():
    base = TotallyRealField(2)
    tower = CMField.over(base, base.element(2, 1))   # 2 +- sqrt2 > 0
    assert tower.sqrt_neg_e() * tower.sqrt_neg_e() == -tower.e


def test_embeddings():
    assert [e.label for e in TotallyRealField(None).embeddings()] == ["sigma_1"]
    embs = TotallyRealField(5).embeddings()
    assert [(e.index, e.sqrtm_sign) for e in embs] == [(1, 1), (2, -1)]


@settings(max_examples=300)
@given(e0_elements())
def test_sign_matches_high_precision(x):
    for emb in TotallyRealField(x.m).embeddings():
        val = decimal_value(x, emb)
        assert sign_at_embedding(x, emb) == (val > 0) - (val < 0)


@settings(max_examples=300)
@given(st.sampled_from(SMALL_M).flatmap(lambda m: st.tuples(e0_elements(m), e0_elements(m))))
def test_sign_multiplicative(pair):
    x, y = pair
    for emb in TotallyRealField(x.m).embeddings():
        assert sign_at_embedding(x * y, emb) == sign_at_embedding(x, emb) * sign_at_embedding(y, emb)


@settings(max_examples=200)
@given(st.sampled_from(SMALL_M).flatmap(lambda m: st.tuples(e0_elements(m), e0_elements(m))))
def test_e0_field_axioms(pair):
    x, y = pair
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).conjugate() == x.conjugate() + y.conjugate()
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y
    assert x ** 3 == x * x * x


@st.composite
def cm_pairs(draw):
    m = draw(st.sampled_from([None] + SMALL_M))
    base = TotallyRealField(m)
    e = draw(st.integers(min_value=1, max_value=7))
    tower = CMField.over(base, e)

    def elt():
        if m is None:
            return tower.element(draw(rationals), draw(rationals))
        return tower.element(base.element(draw(rationals), draw(rationals)),
                             base.element(draw(rationals), draw(rationals)))
    return tower, elt(), elt()


@settings(max_examples=1000)
@given(cm_pairs())
def test_norm_multiplicative(data):
    _, z, w = data
    assert norm_E_over_E0(z * w) == norm_E_over_E0(z) * norm_E_over_E0(w)
    assert z * z.conjugate() == norm_E_over_E0(z)
    assert trace_to_subfield(z) == z + z.conjugate()


@settings(max_examples=200)
@given(cm_pairs())
def test_norm_totally_positive(data):
    tower, z, _ = data
    if z:
        for emb in tower.base.embeddings():
            assert sign_at_embedding(norm_E_over_E0(z), emb) == 1


@settings(max_examples=300)
@given(e0_elements())
def test_square_of_anything_is_found(c):
    x = c * c
    root = is_square_in_E0(x)
    assert root is not None and root * root == x
    assert root in (c, -c)
    assert sign_at_embedding(root, Embedding(1, 1)) >= 0


# non-square classes in Q(sqrt m): -1 and, for m = 2, 3, sqrt2, 1 + sqrt2
@settings(max_examples=200)
@given(e0_elements(m=2), st.sampled_from([(-1, 0), (3, 0), (0, 1), (1, 1), (-2, 0)]))
def test_nonsquares_rejected(c, k):
    if not c:
        return
    x = c * c * E0Element(k[0], k[1], 2)
    assert is_square_in_E0(x) is None


def test_square_examples():
    assert is_square_in_E0(E0Element(2, 0, 2)) == E0Element(0, 1, 2)
    assert is_square_in_E0(E0Element(3, 2, 2)) == E0Element(1, 1, 2)      # (1 + sqrt2)^2
    assert is_square_in_E0(E0Element(Fraction(4, 9))) == Fraction(2, 3)
    assert is_square_in_E0(E0Element(2)) is None
    assert is_square_in_E0(E0Element(-2, 0, 2)) is None


def brute_force_square(x: E0Element, bound: int):
    """Search a + b sqrt m with |a|, |b| <= bound and denominator 1 or 2."""
    vals = [Fraction(k, 2) for k in range(-2 * bound, 2 * bound + 1)]
    for a in vals:
        for b in vals:
            c = E0Element(a, b, x.m)
            if c * c == x:
                return c
    return None


def test_square_test_against_brute_force():
    grid = [E0Element(a, b, 5) for a in range(-6, 7) for b in range(-3, 4)]
    for x in grid:
        found = brute_force_square(x, 4)
        root = is_square_in_E0(x)
        if found is not None:
            assert root is not None and root * root == x
        elif root is not None:
            # a root outside the search box: it must still be a genuine root
            assert root * root == x and max(abs(root.a), abs(root.b)) > 4


def companion(m: int, copies: int) -> ExactMatrix:
    rows = [{} for _ in range(2 * copies)]
    for k in range(copies):
        rows[2 * k][2 * k + 1] = Fraction(m)
        rows[2 * k + 1][2 * k] = Fraction(1)
    return ExactMatrix(2 * copies, 2 * copies, rows)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_eigenspace_projectors(m):
    base = TotallyRealField(m)
    action = companion(m, 3)
    pieces = eigenspace_decompose(6, action, base)
    assert [len(p.basis) for p in pieces] == [3, 3]
    one = base.one()
    ident = ExactMatrix.identity(6, one)
    a = action.map(lambda v: base.element(v))
    a.one = one
    P1, P2 = pieces[0].projector, pieces[1].projector
    assert P1 @ P1 == P1 and P2 @ P2 == P2
    assert (P1 @ P2).is_zero()
    assert P1 + P2 == ident
    for piece in pieces:
        for v in piece.basis:
            av = a.apply(v)
            assert av == {k: piece.eigenvalue * x for k, x in v.items()}
            assert piece.projector.apply(v) == v
    assert pieces[0].eigenvalue == base.sqrt_m() and pieces[1].eigenvalue == -base.sqrt_m()


def test_eigenspace_trivial_for_rationals():
    pieces = eigenspace_decompose(4, ExactMatrix.identity(4), TotallyRealField(None))
    assert len(pieces) == 1 and len(pieces[0].basis) == 4


def test_eigenspace_rejects_bad_action():
    with pytest.raises(InvalidAction):
        eigenspace_decompose(4, ExactMatrix.identity(4), TotallyRealField(2))
    with pytest.raises(InvalidAction):
        eigenspace_decompose(4, ExactMatrix.identity(4).scale(2), TotallyRealField(None))
    with pytest.raises(InvalidAction):
        eigenspace_decompose(3, ExactMatrix.identity(3), TotallyRealField(2))

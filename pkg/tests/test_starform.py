from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from conftest import inversions, make_form
from weilvhs import hermform, starform
from weilvhs.errors import CriterionFailed
from weilvhs.linalg import ExactMatrix


CASES = [(1, [1], None, 1), (2, [2], None, 1), (2, [2], None, 3), (3, [3], None, 3),
         (3, [3, 1], 2, 1), (3, [3, 1], 5, 3), (3, [3, 1], 3, Fraction(1, 2))]


def test_koszul_sign_oracle():
    for size in range(2, 7):
        for k in range(size + 1):
            for I in combinations(range(size), k):
                rest = [j for j in range(size) if j not in I]
                assert starform.koszul_sign(I, size) == (-1) ** inversions(list(I) + rest)


@pytest.mark.parametrize("n,p,m,e", CASES)
def test_star_closed_form(n, p, m, e):
    """star(e_I) = sign(I, I^c) * prod_{i in I} h_i * e_{I^c}."""
    f = make_form(n, p, m=m, e=e)
    star = starform.build_star(n, f)
    basis = list(combinations(range(2 * n), n))
    index = {I: k for k, I in enumerate(basis)}
    for j, I in enumerate(basis):
        comp = tuple(k for k in range(2 * n) if k not in I)
        prod = f.tower.base.one()
        for k in I:
            prod = prod * f.entries[k]
        sign = (-1) ** inversions(list(I) + list(comp))
        assert star.e_matrix.column(j) == {index[comp]: f.tower.element(prod * sign, 0)}


@pytest.mark.parametrize("n,p,m,e", CASES)
def test_star_square(n, p, m, e):
    f = make_form(n, p, m=m, e=e)
    star = starform.build_star(n, f)
    assert starform.verify_star_square(star, n, f)


def test_star_square_negative_control():
    f = make_form(2, [2], e=1)
    star = starform.build_star(2, f)
    wrong = starform.doubled_scalar(-starform.star_square_scalar(2, f), star.wedge_dim, f.tower.e)
    assert star.matrix @ star.matrix != wrong


def test_pairing_kinds():
    f = make_form(2, [2])
    top, powh = starform.build_pairings(2, f)
    assert (top.kind, powh.kind) == ("WedgeTop", "WedgePowerH")
    # [x ^ y] is symmetric for even n, and wedge^n h is diagonal
    assert top.gram == top.gram.transpose()
    assert all(set(r) <= {i} for i, r in enumerate(powh.gram.rows))
    assert top.gram.rank() == 6


def test_doubling_conventions():
    f = make_form(1, [1], e=3)
    tower = f.tower
    e = tower.e
    z = tower.element(2, 5)
    w = tower.element(-1, 4)
    Z = ExactMatrix(1, 1, [{0: z}], tower.one())
    col = ExactMatrix.from_dense([[w.x], [w.y]], one=e * 0 + 1)
    lin = starform.double_e_linear(Z, e) @ col
    conj = starform.double_conjugate_linear(Z, e) @ col
    assert (lin[0, 0], lin[1, 0]) == ((z * w).x, (z * w).y)
    assert (conj[0, 0], conj[1, 0]) == ((z * w.conjugate()).x, (z * w.conjugate()).y)


@pytest.mark.parametrize("n,p,m,e", CASES)
def test_real_form(n, p, m, e):
    f = make_form(n, p, m=m, e=e)
    star = starform.build_star(n, f)
    real = starform.construct_real_form(star, n, f)
    assert real.dim == comb(2 * n, n) == starform.expected_real_form_dim(n)
    assert real.spans
    sigma = starform.sigma_matrix(star, real.witness)
    assert sigma @ sigma == ExactMatrix.identity(2 * star.wedge_dim, star.matrix.one)
    assert sigma @ real.basis == real.basis


def test_real_form_needs_criterion():
    f = make_form(2, [1], override=True)
    star = starform.build_star(2, f)
    with pytest.raises(CriterionFailed):
        starform.construct_real_form(star, 2, f)


@pytest.mark.parametrize("n,p,m,e", [(2, [2], None, 1), (3, [3, 1], 2, 1)])
def test_lie_checks(n, p, m, e):
    f = make_form(n, p, m=m, e=e)
    star = starform.build_star(n, f)
    real = starform.construct_real_form(star, n, f)
    assert starform.star_equivariance_check(star, f, 5, seed=2)
    assert starform.real_form_invariance_check(star, real, f, 5, seed=2)


def test_quaternion_verdicts():
    f = make_form(3, [3, 1], m=2)
    q = starform.quaternion_split_report(3, f, f.tower)
    assert q.verdict == "split" and q.anticommute
    assert q.witness * q.witness == q.j_square == 2
    assert q.i_square == -1
    f = make_form(2, [1], override=True)          # star^2 = -1
    q = starform.quaternion_split_report(2, f, f.tower)
    assert q.verdict == "non-split" and q.witness is None
    f = make_form(3, [3, 2], m=2, override=True)  # star^2 = sqrt2, negative at sigma_2
    q = starform.quaternion_split_report(3, f, f.tower)
    assert q.verdict == "non-split"


def test_quaternion_undetermined(tower_qi):
    # h = diag(-1, 3): star^2 = -disc = 3 is positive but not a square in Q
    base = tower_qi.base
    f = hermform.DiagonalHermitianForm((-base.one(), base.element(3)), tower_qi)
    q = starform.quaternion_split_report(1, f, tower_qi)
    assert q.j_square == 3
    assert q.verdict == "undetermined" and q.witness is None
    assert q.anticommute


def test_pairing_examples():
    f = make_form(2, [2])
    top, powh = starform.build_pairings(2, f)
    assert [powh.gram[i, i] for i in range(6)] == [1, -1, -1, -1, -1, 1]
    # lex basis {01, 02, 03, 12, 13, 23}: [e_0 e_1 ^ e_2 e_3] = +1
    assert top.gram[0, 5] == 1
    g = make_form(1, [1], override=True)
    top1, pow1 = starform.build_pairings(1, g)
    assert top1.gram.to_dense() == [[0, 1], [-1, 0]]
    assert [pow1.gram[i, i] for i in range(2)] == list(g.entries)


def test_star_n1_identity_form(tower_qi):
    base = tower_qi.base
    f = hermform.DiagonalHermitianForm((base.one(), base.one()), tower_qi)
    star = starform.build_star(1, f)
    # star(e_1) = e_2, star(e_2) = -e_1
    assert star.e_matrix.column(0) == {1: tower_qi.one()}
    assert star.e_matrix.column(1) == {0: -tower_qi.one()}


@pytest.mark.parametrize("n,p,m,e", CASES)
def test_star_is_conjugate_linear(n, p, m, e):
    f = make_form(n, p, m=m, e=e)
    star = starform.build_star(n, f)
    i_mat = starform.doubled_scalar(f.tower.sqrt_neg_e(), star.wedge_dim, f.tower.e)
    assert star.matrix @ i_mat == -(i_mat @ star.matrix)


def test_star_square_values():
    for n, p, m, value in [(2, [2], None, 1), (3, [3], None, 1), (3, [3, 1], 2, 2)]:
        f = make_form(n, p, m=m)
        assert starform.star_square_scalar(n, f) == value


def test_real_form_n1_over_gaussian_rationals():
    f = make_form(1, [1])
    star = starform.build_star(1, f)
    real = starform.construct_real_form(star, 1, f)
    assert real.dim == 2 and real.spans

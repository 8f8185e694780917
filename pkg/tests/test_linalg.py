from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilvhs.linalg import ExactMatrix, hstack, same_column_space, vstack
from weilvhs.qfield import E0Element


def random_matrix(rng, rows, cols, density=0.6, lo=-5, hi=5):
    return ExactMatrix.from_dense([[Fraction(rng.randint(lo, hi), rng.randint(1, 3))
                                    if rng.random() < density else 0 for _ in range(cols)]
                                   for _ in range(rows)])


def dense_product(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6))
def test_product_matches_dense(seed, r, k, c):
    rng = random.Random(seed)
    a, b = random_matrix(rng, r, k), random_matrix(rng, k, c)
    assert (a @ b).to_dense() == dense_product(a.to_dense(), b.to_dense())


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6), st.integers(1, 7), st.integers(1, 7))
def test_rank_nullity(seed, r, c):
    rng = random.Random(seed)
    a = random_matrix(rng, r, c, density=0.4)
    null = a.nullspace()
    assert a.rank() + len(null) == c
    for v in null:
        assert a.apply(v) == {}
    if null:
        assert ExactMatrix.from_columns(c, null).rank() == len(null)


def test_low_rank_example():
    # third column = first + second
    a = ExactMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert a.rank() == 2
    (v,) = a.nullspace()
    assert v == {0: -1, 1: -1, 2: 1}


def test_inverse():
    rng = random.Random(5)
    while True:
        a = random_matrix(rng, 5, 5, density=0.9)
        if a.rank() == 5:
            break
    assert a @ a.inverse() == ExactMatrix.identity(5)
    with pytest.raises(ZeroDivisionError):
        ExactMatrix.from_dense([[1, 2], [2, 4]]).inverse()


def test_quadratic_entries_fast_path_agrees():
    rng = random.Random(11)

    def rand_e0():
        return E0Element(rng.randint(-3, 3), rng.randint(-3, 3), 5)
    one = E0Element(1, 0, 5)
    a = ExactMatrix.from_dense([[rand_e0() for _ in range(4)] for _ in range(3)], one=one)
    b = ExactMatrix.from_dense([[rand_e0() for _ in range(2)] for _ in range(4)], one=one)
    expect = dense_product(a.to_dense(), b.to_dense())
    assert (a @ b).to_dense() == expect


def test_rank_over_quadratic_field():
    one = E0Element(1, 0, 2)
    r = E0Element(0, 1, 2)
    # rows (1, sqrt2) and (sqrt2, 2) are dependent over Q(sqrt2)
    a = ExactMatrix.from_dense([[one, r], [r, one * 2]], one=one)
    assert a.rank() == 1


def test_blocks_and_stacks():
    a = ExactMatrix.identity(2)
    b = ExactMatrix.zeros(2, 1)
    h = hstack([a, b])
    assert h.shape == (2, 3)
    v = vstack([a, a])
    assert v.shape == (4, 2) and v.rank() == 2
    assert same_column_space(a, a.scale(3))
    assert not same_column_space(ExactMatrix.from_dense([[1], [0]]), ExactMatrix.from_dense([[0], [1]]))
    with pytest.raises(ValueError):
        ExactMatrix.block([[a, ExactMatrix.zeros(3, 1)]])


def test_transpose_and_equality():
    a = ExactMatrix.from_dense([[1, 0, 2], [0, 3, 0]])
    assert a.transpose().transpose() == a
    assert a.transpose().shape == (3, 2)
    assert a[0, 2] == 2 and a[1, 0] == 0
    assert (a - a).is_zero()

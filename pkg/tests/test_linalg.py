import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homres import linalg as la

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


def test_is_prime():
    assert [n for n in range(20) if la.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert la.is_prime(2**31 - 1)


def test_rref_small():
    red = la.rref(np.array([[2, 4], [1, 1]]), 5)
    assert red.rank == 2
    assert np.array_equal(red.reduced, np.eye(2, dtype=np.int64))


@given(matrices())
def test_rank_nullity(mp):
    a, p = mp
    k = la.kernel_basis(a, p)
    assert la.rank(a, p) + k.shape[1] == a.shape[1]
    if a.shape[0] and k.shape[1]:
        assert not la.matmul(a, k, p).any()
    assert la.rank(k, p) == k.shape[1]


@given(matrices(), st.data())
def test_solve_consistent_rhs(mp, data):
    a, p = mp
    if a.shape[1] == 0:
        return
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])))
    b = la.matmul(a, x0.reshape(-1, 1), p)[:, 0]
    x, hom = la.solve(a, b, p)
    assert x is not None
    assert np.array_equal(la.matmul(a, x.reshape(-1, 1), p)[:, 0], b)
    assert hom.shape[1] == a.shape[1] - la.rank(a, p)


def test_solve_inconsistent():
    x, _ = la.solve(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 2)
    assert x is None
    assert la.solve_particular(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 2) is None


def test_solve_sets_free_variables_to_zero():
    x, _ = la.solve(np.array([[1, 1, 0]]), np.array([1]), 3)
    assert x.tolist() == [1, 0, 0]


@given(matrices(5, 5))
def test_inverse_roundtrip(mp):
    a, p = mp
    n = min(a.shape)
    sq = a[:n, :n]
    if la.rank(sq, p) < n:
        with pytest.raises(ValueError):
            la.inverse(sq, p)
        return
    inv = la.inverse(sq, p)
    assert np.array_equal(la.matmul(sq, inv, p), la.identity(n, p))


@given(matrices(6, 4))
def test_column_basis_and_left_inverse(mp):
    a, p = mp
    b = la.column_basis(a, p)
    assert b.shape[1] == la.rank(a, p)
    assert la.same_column_space(a, b, p)
    left = la.left_inverse(b, p)
    assert np.array_equal(la.matmul(left, b, p), la.identity(b.shape[1], p))


def test_large_prime_uses_exact_arithmetic():
    p = 2**61 - 1
    a = la.as_matrix([[p - 1, 2], [3, p - 2]], p)
    assert a.dtype == object
    inv = la.inverse(a, p)
    assert np.array_equal(la.matmul(a, inv, p) % p, la.identity(2, p))


def test_matmul_switches_to_objects_near_overflow():
    p = 2**31 - 1
    a = np.full((1, 4), p - 1, dtype=np.int64)
    b = np.full((4, 1), p - 1, dtype=np.int64)
    assert int(la.matmul(a, b, p)[0, 0]) == (4 * (p - 1) ** 2) % p


def test_vec_unvec():
    m = np.arange(6).reshape(2, 3)
    assert np.array_equal(la.unvec(la.vec(m), 2, 3), m)

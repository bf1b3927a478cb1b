"""Exact linear algebra over GF(p), checked against a plain row reduction."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

import oracles
from modcx import linalg as la

PRIMES = [2, 3, 7, 101, 32003]


def matrices(max_side=12, p=101):
    shape = st.tuples(st.integers(0, max_side), st.integers(0, max_side))
    return shape.flatmap(lambda s: hnp.arrays(np.int64, s, elements=st.integers(0, p - 1)))


def low_rank(rng, rows, cols, r, p):
    a = rng.integers(0, p, size=(rows, r))
    b = rng.integers(0, p, size=(r, cols))
    return (a @ b) % p


def test_is_prime():
    assert [n for n in range(30) if la.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_matmul_exact_for_large_prime():
    p = 2**31 - 1
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, size=(5, 7))
    b = rng.integers(0, p, size=(7, 3))
    want = (a.astype(object) @ b.astype(object)) % p
    assert np.array_equal(la.matmul(a, b, p), want.astype(np.int64))


def test_matmul_shape_error():
    with pytest.raises(la.DimensionError):
        la.matmul(la.zeros(2, 3), la.zeros(2, 3), 5)


@given(matrices())
def test_rref_matches_oracle(a):
    if a.size == 0:
        return
    red, piv = la.rref(a, 101)
    ored, opiv = oracles.row_reduce(a, 101)
    assert piv == opiv
    assert np.array_equal(red, ored)


@pytest.mark.parametrize("p", [101, 7])
@pytest.mark.parametrize("shape,r", [((150, 130), 60), ((97, 210), 97), ((200, 200), 5), ((120, 300), 0)])
def test_blocked_rref_equals_unblocked(p, shape, r):
    rng = np.random.default_rng(shape[0] + r)
    a = low_rank(rng, *shape, r, p)
    blocked = la.rref(a, p)
    plain = la._rref_unblocked(a.copy(), p)
    assert blocked[1] == plain[1]
    assert np.array_equal(blocked[0], plain[0])
    assert len(blocked[1]) == oracles.rank(a, p)


@given(matrices(), st.sampled_from(PRIMES[:4]))
def test_rank_nullity(a, p):
    a = a % p
    rows, cols = a.shape
    k = la.kernel_basis(a, p)
    assert k.shape == (cols, cols - la.rank(a, p))
    if rows and cols:
        assert not la.matmul(a, k, p).any()
        assert la.rank(k, p) == k.shape[1]


@given(matrices(8))
def test_solve_roundtrip(a):
    if a.size == 0:
        return
    x0 = np.arange(a.shape[1]) % 101
    b = la.matmul(a, x0.reshape(-1, 1), 101)[:, 0]
    x = la.solve(a, b, 101)
    assert np.array_equal(la.matmul(a, x.reshape(-1, 1), 101)[:, 0], b)


def test_solve_inconsistent():
    a = np.array([[1, 0], [0, 0]])
    assert la.solve(a, [0, 1], 5) is None


@given(st.integers(1, 10), st.integers(0, 10**6))
def test_inverse(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 101, size=(n, n))
    if oracles.rank(a, 101) < n:
        with pytest.raises(ZeroDivisionError):
            la.inverse(a, 101)
        return
    assert np.array_equal(la.matmul(a, la.inverse(a, 101), 101), la.identity(n))


def test_singular_inverse():
    with pytest.raises(ZeroDivisionError):
        la.inverse([[1, 2], [2, 4]], 101)


@given(st.integers(0, 10**6))
def test_subspace_intersection_dimension(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    u = rng.integers(0, 7, size=(n, int(rng.integers(0, n + 1))))
    v = rng.integers(0, 7, size=(n, int(rng.integers(0, n + 1))))
    inter = la.subspace_intersection(u, v, 7)
    summ = la.subspace_sum(u, v, 7)
    assert inter.shape[1] + summ.shape[1] == oracles.rank(u, 7) + oracles.rank(v, 7)


def test_echelon_basis_coordinates():
    v = np.array([[1, 2], [3, 4], [5, 6]])
    b, rows = la.echelon_basis(v, 101)
    assert np.array_equal(b[rows], la.identity(2))
    w = (2 * v[:, 0] + 3 * v[:, 1]) % 101
    assert np.array_equal(la.matmul(b, w[rows].reshape(-1, 1), 101)[:, 0], w)


def test_power():
    a = np.array([[1, 1], [0, 1]])
    assert np.array_equal(la.power(a, 50, 7), np.array([[1, 50 % 7], [0, 1]]))


def test_inputs_not_modified():
    a = np.array([[2, 4], [1, 3]])
    before = a.copy()
    la.rref(a, 5)
    la.kernel_basis(a, 5)
    assert np.array_equal(a, before)

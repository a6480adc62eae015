import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trirep import linalg as la
from trirep.errors import MalformedInputError


@st.composite
def matrices(draw, max_rows=4, max_cols=4, primes=(2, 3, 5)):
    p = draw(st.sampled_from(primes))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=np.int64).reshape(r, c), p


def brute_kernel_size(a, p):
    cols = a.shape[1]
    return sum(1 for v in itertools.product(range(p), repeat=cols) if not ((a @ np.array(v)) % p).any())


def test_rref_small_example():
    red, piv = la.rref(np.array([[1, 1, 0], [1, 1, 1]]), 2)
    assert red.tolist() == [[1, 1, 0], [0, 0, 1]]
    assert piv == [0, 2]
    assert la.rank(np.array([[1, 1, 0], [1, 1, 1]]), 2) == 2


def test_solve_particular_and_kernel():
    a = np.array([[1, 1]])
    x = la.solve(a, np.array([1]), 2)
    assert x.tolist() == [1, 0]
    ker = la.kernel(a, 2)
    assert ker.basis.tolist() == [[1, 1]]


def test_solve_inconsistent_returns_none():
    assert la.solve(np.array([[0, 0]]), np.array([1]), 3) is None


def test_quotient_by_diagonal():
    sub = la.Subspace.span([[1, 1]], 2, 2)
    q = la.quotient(2, sub)
    assert q.dim == 1
    # the diagonal is killed, the complement coordinate survives
    assert not (q.projection @ np.array([1, 1]) % 2).any()
    assert (q.projection @ q.section % 2).tolist() == [[1]]


def test_matrix_json_form_roundtrip():
    m = la.Matrix.from_rows([[1, 2], [0, 1]], 3)
    assert (m.rows, m.cols, m.entries) == (2, 2, [1, 2, 0, 1])
    assert la.Matrix.from_json({"p": 3, "rows": 2, "cols": 2, "entries": [1, 2, 0, 1]}) == m


def test_matrix_rejects_bad_input():
    with pytest.raises(MalformedInputError):
        la.Matrix.from_json({"p": 2, "rows": 2, "cols": 2, "entries": [1, 0, 1]})
    with pytest.raises(MalformedInputError):
        la.Matrix.from_rows([[1]], 4)
    with pytest.raises(MalformedInputError):
        la.Matrix.from_rows([[1]], 2) @ la.Matrix.from_rows([[1]], 3)


def test_inverse_and_invertibility():
    a = np.array([[1, 2], [3, 4]])
    inv = la.inverse(a, 5)
    assert (a @ inv % 5).tolist() == [[1, 0], [0, 1]]
    assert not la.is_invertible(np.array([[1, 1], [1, 1]]), 2)
    with pytest.raises(MalformedInputError):
        la.inverse(np.array([[1, 1], [1, 1]]), 2)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_idempotent_and_rank_nullity(mp):
    a, p = mp
    red, piv = la.rref(a, p)
    red2, piv2 = la.rref(red, p)
    assert np.array_equal(red, red2) and piv == piv2
    ker = la.kernel(a, p)
    assert len(piv) + ker.dim == a.shape[1]
    assert p ** ker.dim == brute_kernel_size(a, p)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_is_correct_or_certifiably_impossible(mp, data):
    a, p = mp
    b = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[0], max_size=a.shape[0])), dtype=np.int64)
    x = la.solve(a, b, p)
    reachable = any(
        np.array_equal((a @ np.array(v)) % p, b % p) for v in itertools.product(range(p), repeat=a.shape[1])
    )
    if x is None:
        assert not reachable
    else:
        assert np.array_equal((a @ x) % p, b % p)


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=3, max_cols=4))
def test_quotient_identities(mp):
    a, p = mp
    n = a.shape[1]
    sub = la.Subspace.span(a, n, p)
    q = la.quotient(n, sub)
    assert q.dim == n - sub.dim
    assert not (q.projection @ sub.columns() % p).any()
    assert np.array_equal(q.projection @ q.section % p, la.identity(q.dim))
    assert la.is_surjective(q.projection, p) or q.dim == 0


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=3), matrices(max_rows=3))
def test_subspace_sum_and_intersection_dimensions(m1, m2):
    a, p = m1
    b, _ = m2
    n = min(a.shape[1], b.shape[1])
    u = la.Subspace.span(a[:, :n] % p, n, p)
    w = la.Subspace.span(b[:, :n] % p, n, p)
    assert (u + w).dim + u.intersect(w).dim == u.dim + w.dim
    meet = u.intersect(w)
    if meet.dim:
        assert u.contains(meet.columns()) and w.contains(meet.columns())

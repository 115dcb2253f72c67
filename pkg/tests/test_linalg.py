import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hermitegf.errors import SingularMatrix
from hermitegf.linalg import (
    condition_number_2,
    lu_factor,
    lu_solve,
    qr_thin,
    solve,
    solve_right,
    upper_tri_solve_right,
)


def test_qr_identity():
    Q, R, full = qr_thin(np.eye(3))
    assert full
    np.testing.assert_allclose(Q, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(R, np.eye(3), atol=1e-15)


def test_qr_single_column_by_hand():
    Q, R, _ = qr_thin(np.array([[3.0], [4.0]]))
    np.testing.assert_allclose(Q[:, 0], [0.6, 0.8], rtol=1e-15)
    np.testing.assert_allclose(R, [[5.0]], rtol=1e-15)


def test_qr_random_reconstruction(rng):
    A = rng.standard_normal((6, 4))
    Q, R, full = qr_thin(A)
    assert full
    np.testing.assert_allclose(Q.T @ Q, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(Q @ R, A, atol=1e-12)
    assert np.all(np.diag(R) >= 0)
    assert np.allclose(np.tril(R, -1), 0.0)


def test_qr_rank_flag():
    A = np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    _, R, full = qr_thin(A)
    assert not full
    assert R[1, 1] == 0.0


def test_qr_rejects_wide():
    with pytest.raises(ValueError):
        qr_thin(np.ones((2, 3)))


@given(arrays(np.float64, (7, 5), elements=st.floats(-10, 10)))
def test_qr_invariants(A):
    Q, R, full = qr_thin(A)
    n = A.shape[1]
    scale = max(np.linalg.norm(A), 1.0)
    assert np.linalg.norm(Q @ R - A) <= 1e-12 * scale
    assert np.all(np.diag(R) >= 0)
    if full:
        assert np.linalg.norm(Q.T @ Q - np.eye(n)) <= 1e-12 * n


def test_solve_examples(rng):
    B = rng.standard_normal((2, 3))
    np.testing.assert_array_equal(solve(np.eye(2), B), B)
    np.testing.assert_allclose(solve(np.diag([2.0, 4.0]), np.array([2.0, 8.0])), [1.0, 2.0])
    A = rng.standard_normal((8, 8)) + 8 * np.eye(8)
    B = rng.standard_normal((8, 2))
    X = solve(A, B)
    assert np.linalg.norm(A @ X - B) / np.linalg.norm(B) <= 1e-12


def test_solve_singular():
    with pytest.raises(SingularMatrix):
        solve(np.zeros((2, 2)), np.ones(2))


@given(st.integers(0, 2**31 - 1), st.floats(0.0, 6.0))
def test_solve_roundtrip(seed, log_cond):
    r = np.random.default_rng(seed)
    U, _ = np.linalg.qr(r.standard_normal((6, 6)))
    V, _ = np.linalg.qr(r.standard_normal((6, 6)))
    A = U @ np.diag(np.logspace(0, -log_cond, 6)) @ V.T
    B = r.standard_normal((6, 3))
    kappa = condition_number_2(A)
    X = solve(A, B)
    assert np.linalg.norm(A @ X - B) <= 1e-10 * kappa * np.linalg.norm(B)
    M = solve_right(B.T, A.T)
    assert np.linalg.norm(M @ A.T - B.T) <= 1e-10 * kappa * np.linalg.norm(B)


def test_solve_right_examples(rng):
    A = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    np.testing.assert_allclose(solve_right(A, A), np.eye(4), atol=1e-13)
    M = solve_right(np.eye(4), A)
    np.testing.assert_allclose(A @ M, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(solve_right(np.array([[6.0]]), np.array([[3.0]])), [[2.0]])
    b = rng.standard_normal(4)
    np.testing.assert_allclose(solve_right(b, A) @ A, b, atol=1e-12)


def test_lu_solve_transposed(rng):
    A = rng.standard_normal((5, 5)) + 5 * np.eye(5)
    b = rng.standard_normal(5)
    x = lu_solve(lu_factor(A), b, trans=1)
    np.testing.assert_allclose(A.T @ x, b, atol=1e-12)


def test_upper_tri_solve_right():
    R2 = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(upper_tri_solve_right(np.eye(2), R2), R2)
    Rt = upper_tri_solve_right(np.array([[1.0, 1.0], [0.0, 2.0]]), np.array([[3.0], [4.0]]))
    np.testing.assert_allclose(Rt, [[1.0], [2.0]])
    with pytest.raises(SingularMatrix):
        upper_tri_solve_right(np.array([[1.0, 1.0], [0.0, 0.0]]), np.ones((2, 1)))
    assert upper_tri_solve_right(np.eye(3), np.zeros((3, 0))).shape == (3, 0)


def test_upper_tri_reconstruction(rng):
    R1 = np.triu(rng.standard_normal((7, 7))) + 3 * np.eye(7)
    R2 = rng.standard_normal((7, 4))
    Rt = upper_tri_solve_right(R1, R2)
    np.testing.assert_allclose(R1 @ Rt, R2, atol=1e-13)


def test_condition_number(rng):
    assert condition_number_2(np.eye(4)) == pytest.approx(1.0)
    assert condition_number_2(np.diag([10.0, 1.0])) == pytest.approx(10.0)
    Q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    assert abs(condition_number_2(Q) - 1.0) < 1e-10
    assert condition_number_2(np.zeros((2, 2))) == np.inf
    assert condition_number_2(np.array([[np.nan]])) == np.inf

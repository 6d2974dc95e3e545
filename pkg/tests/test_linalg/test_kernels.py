# tests/test_linalg/test_kernels.py
import numpy as np
import pytest
import scipy.linalg

from lapnet.linalg.kernels import (
    as_mat, is_hurwitz, solve_lyapunov, solve_lyapunov_multi, spectral_abscissa,
    vectorized_lyapunov_matrix
)
from lapnet.utils.errors import ModelValidationError, UnstableError


def test_as_mat_promotes_scalars_and_vectors():
    assert as_mat(2.0).shape == (1, 1)
    assert as_mat([1.0, 2.0]).shape == (1, 2)


@pytest.mark.parametrize("bad", [[[1.0, np.nan]], [[np.inf]], [["a"]]])
def test_as_mat_rejects_non_finite(bad):
    with pytest.raises(ModelValidationError):
        as_mat(bad, "A")


def test_spectral_abscissa_and_hurwitz():
    A = np.array([[0.0, 1.0], [-1.0, -1.0]])
    assert spectral_abscissa(A) == pytest.approx(-0.5)
    assert is_hurwitz(A)
    assert is_hurwitz(A, margin=0.4)
    assert not is_hurwitz(A, margin=0.6)
    assert not is_hurwitz(np.zeros((2, 2)))


def test_kronecker_sum_matches_vec_identity():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((3, 3))
    P = rng.standard_normal((3, 3))
    lhs = vectorized_lyapunov_matrix(A) @ P.reshape(-1, order="F")
    rhs = (A @ P + P @ A.T).reshape(-1, order="F")
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_lyapunov_worked_example():
    A = np.array([[0.0, 1.0], [-1.0, -1.0]])
    P = solve_lyapunov(A, np.eye(2))
    np.testing.assert_allclose(P, [[1.5, -0.5], [-0.5, 1.0]], atol=1e-12)
    assert np.trace(P) == pytest.approx(2.5)


@pytest.mark.parametrize("n", [3, 6, 12])
def test_lyapunov_matches_scipy(n):
    rng = np.random.default_rng(n)
    A = rng.standard_normal((n, n))
    A -= (np.max(np.linalg.eigvals(A).real) + 1.0) * np.eye(n)
    E = rng.standard_normal((n, 2))
    P = solve_lyapunov(A, E @ E.T)
    expected = scipy.linalg.solve_continuous_lyapunov(A, -E @ E.T)
    np.testing.assert_allclose(P, expected, rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(P, P.T)


def test_multi_shares_operator():
    A = -np.diag([1.0, 2.0])
    P1, P2 = solve_lyapunov_multi(A, [np.eye(2), 2 * np.eye(2)])
    np.testing.assert_allclose(P1, np.diag([0.5, 0.25]))
    np.testing.assert_allclose(P2, 2 * P1)


def test_lyapunov_unstable_raises():
    with pytest.raises(UnstableError, match="unstable"):
        solve_lyapunov(np.eye(2), np.eye(2))


def test_lyapunov_shape_mismatch():
    with pytest.raises(ModelValidationError):
        solve_lyapunov(-np.eye(2), np.eye(3))


@pytest.mark.parametrize("seed", range(30))
def test_multi_matches_scipy_on_random_hurwitz(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 7))
    A = rng.standard_normal((n, n))
    A -= (np.max(np.linalg.eigvals(A).real) + rng.uniform(0.1, 2.0)) * np.eye(n)
    forcings = []
    for _ in range(3):
        E = rng.standard_normal((n, int(rng.integers(1, 3))))
        forcings.append(E @ E.T)
    solutions = solve_lyapunov_multi(A, forcings)
    for W, P in zip(forcings, solutions):
        expected = scipy.linalg.solve_continuous_lyapunov(A, -W)
        np.testing.assert_allclose(P, expected, rtol=1e-7, atol=1e-9)
        scale = np.linalg.norm(A) * np.linalg.norm(P) + np.linalg.norm(W)
        assert np.linalg.norm(A @ P + P @ A.T + W) <= 1e-9 * scale

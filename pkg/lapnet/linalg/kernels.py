# lapnet/linalg/kernels.py
import logging

import numpy as np
import scipy.linalg

from ..utils.errors import ModelValidationError, NumericalFailure, UnstableError

logger = logging.getLogger(__name__)

# Up to this size the Kronecker-sum linear solve is used; beyond it Bartels-Stewart.
KRONECKER_MAX_ORDER = 8


def as_mat(value, name="matrix"):
    """Returns `value` as a finite 2-D float array, raising ModelValidationError otherwise."""
    try:
        mat = np.atleast_2d(np.asarray(value, dtype=float))
    except (TypeError, ValueError) as e:
        raise ModelValidationError(f"{name} is not a real matrix: {e}", field=name) from e
    if mat.ndim != 2:
        raise ModelValidationError(f"{name} must be two-dimensional, got shape {mat.shape}", field=name)
    if not np.all(np.isfinite(mat)):
        raise ModelValidationError(f"{name} contains NaN or Inf entries", field=name)
    return mat


def _require_square(mat, name):
    if mat.shape[0] != mat.shape[1]:
        raise ModelValidationError(f"{name} must be square, got shape {mat.shape}", field=name)


def symmetrize(P):
    return 0.5 * (P + P.T)


def spectral_abscissa(M):
    """Largest real part over the eigenvalues of M (-inf for an empty matrix)."""
    M = as_mat(M, "M") if np.size(M) else np.zeros((0, 0))
    if M.size == 0:
        return -np.inf
    _require_square(M, "M")
    try:
        eigenvalues = scipy.linalg.eigvals(M)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalFailure(f"eigenvalue computation failed: {e}") from e
    if not np.all(np.isfinite(eigenvalues)):
        raise NumericalFailure("eigenvalue computation returned non-finite values")
    return float(np.max(eigenvalues.real))


def is_hurwitz(M, margin=0.0):
    """True iff every eigenvalue of M has real part < -margin."""
    if margin < 0:
        raise ModelValidationError("margin must be non-negative", field="margin")
    return spectral_abscissa(M) < -margin


def vectorized_lyapunov_matrix(A_lambda):
    """
    Kronecker sum A⊗I + I⊗A.

    For column-major vec, (A⊗I + I⊗A) vec(P) = vec(AP + PAᵀ).
    """
    A = as_mat(A_lambda, "A_lambda")
    _require_square(A, "A_lambda")
    eye = np.eye(A.shape[0])
    return np.kron(A, eye) + np.kron(eye, A)


def _check_residual(A, P, W):
    residual = np.linalg.norm(A @ P + P @ A.T + W)
    scale = np.linalg.norm(A) * np.linalg.norm(P) + np.linalg.norm(W)
    if scale > 0 and residual > 1e-10 * scale:
        logger.warning(f"Lyapunov residual {residual:.3e} exceeds 1e-10 of scale {scale:.3e}")
    return residual


def solve_lyapunov_multi(A, forcings, check_stability=True):
    """
    Solves AP + PAᵀ + W = 0 for each W in `forcings`, sharing one factorization.

    Args:
        A: Hurwitz matrix (n×n).
        forcings: iterable of symmetric n×n matrices.
        check_stability: skip the Hurwitz test when the caller already did it.

    Returns:
        list of symmetric solutions, in the order of `forcings`.

    Raises:
        UnstableError: A is not Hurwitz.
        ModelValidationError: shapes do not match.
    """
    A = as_mat(A, "A")
    _require_square(A, "A")
    n = A.shape[0]
    Ws = []
    for idx, W in enumerate(forcings):
        W = as_mat(W, f"W[{idx}]")
        if W.shape != (n, n):
            raise ModelValidationError(f"forcing shape {W.shape} does not match A of order {n}", field="W")
        Ws.append(symmetrize(W))
    if n == 0:
        return [np.zeros((0, 0)) for _ in Ws]
    if check_stability and not is_hurwitz(A):
        raise UnstableError("unstable: Lyapunov equation requires a Hurwitz matrix",
                            condition="A Hurwitz")

    if n <= KRONECKER_MAX_ORDER:
        kron_sum = vectorized_lyapunov_matrix(A)
        rhs = np.column_stack([-W.reshape(-1, order='F') for W in Ws])
        try:
            lu_piv = scipy.linalg.lu_factor(kron_sum)
            columns = scipy.linalg.lu_solve(lu_piv, rhs)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NumericalFailure(f"Kronecker Lyapunov solve failed: {e}") from e
        solutions = [symmetrize(columns[:, k].reshape((n, n), order='F')) for k in range(len(Ws))]
    else:
        try:
            solutions = [symmetrize(scipy.linalg.solve_continuous_lyapunov(A, -W)) for W in Ws]
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NumericalFailure(f"Bartels-Stewart Lyapunov solve failed: {e}") from e

    for P, W in zip(solutions, Ws):
        _check_residual(A, P, W)
    return solutions


def solve_lyapunov(A, W):
    """Symmetric P with AP + PAᵀ + W = 0 for Hurwitz A."""
    W = as_mat(W, "W")
    return solve_lyapunov_multi(A, [W])[0]

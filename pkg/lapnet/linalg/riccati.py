# lapnet/linalg/riccati.py
import logging

import numpy as np
import scipy.linalg

from .kernels import as_mat, is_hurwitz, solve_lyapunov, symmetrize
from ..utils.errors import ModelValidationError, NotStabilizableError, NumericalFailure
from ..utils.schemas import DEFAULT_PBH_TOL

logger = logging.getLogger(__name__)

CARE_RESIDUAL_TOL = 1e-9


def is_stabilizable(A, B, tol=DEFAULT_PBH_TOL):
    """
    PBH eigenvector test: rank [A − λI, B] = n for every eigenvalue with Re λ ≥ 0.
    """
    A = as_mat(A, "A")
    B = as_mat(B, "B")
    n = A.shape[0]
    if B.shape[0] != n:
        raise ModelValidationError(f"B has {B.shape[0]} rows, expected {n}", field="B")
    scale = max(1.0, np.linalg.norm(A), np.linalg.norm(B))
    for lam in scipy.linalg.eigvals(A):
        if lam.real < -tol:
            continue
        pencil = np.hstack([A - lam * np.eye(n), B.astype(complex)])
        smallest = np.linalg.svd(pencil, compute_uv=False)[-1] if n else 1.0
        if smallest <= tol * scale:
            logger.debug(f"PBH test failed at eigenvalue {lam}")
            return False
    return True


def is_detectable(A, C, tol=DEFAULT_PBH_TOL):
    return is_stabilizable(as_mat(A, "A").T, as_mat(C, "C").T, tol=tol)


def care_residual(A, B, s, Q, P):
    """Relative residual of AᵀP + PA + Q − s·PBBᵀP."""
    BBt = B @ B.T
    quad = s * P @ BBt @ P
    residual = A.T @ P + P @ A + Q - quad
    scale = 2 * np.linalg.norm(A.T @ P) + np.linalg.norm(Q) + np.linalg.norm(quad)
    return np.linalg.norm(residual) / scale if scale > 0 else np.linalg.norm(residual)


def _newton_step(A, B, s, Q, P):
    """One Kleinman iteration from a stabilizing P."""
    BBt = B @ B.T
    closed = A - s * BBt @ P
    if not is_hurwitz(closed):
        return None
    return solve_lyapunov(closed.T, Q + s * P @ BBt @ P)


def solve_care(A, B, R_inv_scale, Q):
    """
    Stabilizing solution of AᵀP + PA + Q − s·PBBᵀP = 0 with s = R_inv_scale.

    Uses the ordered real Schur form of the balanced Hamiltonian, followed by a
    Newton refinement step when the residual is above tolerance.

    Raises:
        NotStabilizableError: (A, B) fails the PBH test or no stabilizing
            solution exists.
        NumericalFailure: the computed solution is not stabilizing.
    """
    A = as_mat(A, "A")
    B = as_mat(B, "B")
    Q = symmetrize(as_mat(Q, "Q"))
    n = A.shape[0]
    s = float(R_inv_scale)
    if A.shape != (n, n) or B.shape[0] != n or Q.shape != (n, n):
        raise ModelValidationError(f"inconsistent shapes A{A.shape} B{B.shape} Q{Q.shape}", field="A")
    if not s > 0:
        raise ModelValidationError("R_inv_scale must be positive", field="R_inv_scale")
    if not is_stabilizable(A, B):
        raise NotStabilizableError("not stabilizable: (A, B) fails the PBH rank test")

    BBt = B @ B.T
    norm_b, norm_q = np.linalg.norm(BBt), np.linalg.norm(Q)
    gamma = np.sqrt(s * norm_b / norm_q) if norm_b > 0 and norm_q > 0 else 1.0
    hamiltonian = np.block([[A, -(s / gamma) * BBt], [-gamma * Q, -A.T]])

    T, Z, sdim = scipy.linalg.schur(hamiltonian, output='real', sort='lhp')
    if sdim != n:
        raise NotStabilizableError(
            f"no stabilizing solution: Hamiltonian has {sdim} stable eigenvalues, expected {n}")
    U11, U21 = Z[:n, :n], Z[n:, :n]
    if np.linalg.cond(U11) > 1e12:
        raise NumericalFailure(f"Riccati basis is ill-conditioned (cond {np.linalg.cond(U11):.2e})")
    X = np.linalg.solve(U11.T, U21.T).T
    P = symmetrize(X / gamma)

    residual = care_residual(A, B, s, Q, P)
    if residual > CARE_RESIDUAL_TOL:
        refined = _newton_step(A, B, s, Q, P)
        if refined is not None:
            refined_residual = care_residual(A, B, s, Q, refined)
            if refined_residual < residual:
                P, residual = refined, refined_residual
        logger.debug(f"CARE Newton refinement, residual now {residual:.3e}")
    if residual > CARE_RESIDUAL_TOL:
        logger.warning(f"CARE residual {residual:.3e} above {CARE_RESIDUAL_TOL:.0e}")

    if not is_hurwitz(A - s * BBt @ P):
        raise NumericalFailure("Riccati solution is not stabilizing")
    return P

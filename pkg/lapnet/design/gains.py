# lapnet/design/gains.py
import logging
from dataclasses import dataclass

import numpy as np

from .threshold import ThresholdResult, lambda_tilde, lambda_tilde_observer
from ..linalg.riccati import is_detectable, is_stabilizable, solve_care
from ..utils.errors import ModelValidationError, NotStabilizableError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GainDesign:
    """
    Result of a threshold-guaranteeing design.

    `gain` is K (p×n) for the regulator or F (n×q) for the observer, `Q` the
    LMI certificate and `certificate_max_eig` the largest eigenvalue of the
    LMI expression, negative when the certificate holds.
    """
    gain: np.ndarray
    riccati_solution: np.ndarray
    Q: np.ndarray
    c: float
    certificate_max_eig: float
    threshold: ThresholdResult

    @property
    def satisfies_bound(self):
        return self.threshold.lambda_tilde <= self.c * (1 + 1e-6)

    def to_dict(self, name):
        return {name: self.gain, "c": self.c, "certificate_max_eig": self.certificate_max_eig,
                "satisfies_bound": self.satisfies_bound, "threshold": self.threshold.to_dict()}


def _check_c(c):
    if not c > 0:
        raise ModelValidationError(f"c must be positive, got {c}", field="c")
    return float(c)


def design_gain(s, c, decay=0.0):
    """
    Feedback gain K with λ̃(K) ≤ c.

    P is the stabilizing solution of AᵀP + PA − c·PBBᵀP + I = 0 and K = ½BᵀP.
    Then Q = P⁻¹ satisfies AQ + QAᵀ − cBBᵀ = −Q², and for every λ ≥ c
    (A − λBK)Q + Q(A − λBK)ᵀ = −Q² − (λ − c)BBᵀ ≺ 0.

    `decay` > 0 designs for A + decay·I, which additionally places the
    closed-loop modes for λ ≥ c to the left of −decay.

    Raises:
        NotStabilizableError: (A, B) is not stabilizable.
    """
    c = _check_c(c)
    A = s.A + decay * np.eye(s.n)
    if not is_stabilizable(A, s.B):
        raise NotStabilizableError("not stabilizable: (A, B) fails the PBH rank test")
    P = solve_care(A, s.B, c, np.eye(s.n))
    K = 0.5 * s.B.T @ P
    Q = np.linalg.inv(P)
    lmi = A @ Q + Q @ A.T - c * s.B @ s.B.T
    certificate = float(np.max(np.linalg.eigvalsh(0.5 * (lmi + lmi.T))))
    threshold = lambda_tilde(s.state_feedback(), K)
    design = GainDesign(gain=K, riccati_solution=P, Q=Q, c=c, certificate_max_eig=certificate,
                        threshold=threshold)
    if not design.satisfies_bound:
        logger.warning(f"Designed K has lambda_tilde={threshold.lambda_tilde:.6g} above c={c}")
    logger.info(f"Designed K for c={c}: lambda_tilde={threshold.lambda_tilde:.6g}, "
                f"certificate max eig {certificate:.3e}")
    return design


def design_observer(s, c):
    """
    Observer gain F with λ̃(F) ≤ c, the transpose dual of design_gain:
    S solves AS + SAᵀ − c·SHᵀHS + I = 0 and F = ½SHᵀ.

    Raises:
        NotStabilizableError: (A, H) is not detectable.
    """
    c = _check_c(c)
    if not is_detectable(s.A, s.H):
        raise NotStabilizableError("not detectable: (A, H) fails the PBH rank test")
    S = solve_care(s.A.T, s.H.T, c, np.eye(s.n))
    F = 0.5 * S @ s.H.T
    Q = np.linalg.inv(S)
    lmi = s.A.T @ Q + Q @ s.A - c * s.H.T @ s.H
    certificate = float(np.max(np.linalg.eigvalsh(0.5 * (lmi + lmi.T))))
    threshold = lambda_tilde_observer(s, F)
    design = GainDesign(gain=F, riccati_solution=S, Q=Q, c=c, certificate_max_eig=certificate,
                        threshold=threshold)
    if not design.satisfies_bound:
        logger.warning(f"Designed F has lambda_tilde={threshold.lambda_tilde:.6g} above c={c}")
    logger.info(f"Designed F for c={c}: lambda_tilde={threshold.lambda_tilde:.6g}")
    return design


# lapnet/performance/functions.py
import logging
from typing import NamedTuple

import numpy as np

from ..design.threshold import lambda_tilde, lambda_tilde_observer
from ..linalg.kernels import is_hurwitz, solve_lyapunov_multi
from ..model.composite_model import composite_matrices
from ..model.network import (augment_observer, decoupled_matrix, observer_gain_identity,
                             separation_blocks)
from ..model.subsystem import check_gain, check_observer_gain, check_state_gain
from ..utils.errors import ModelValidationError, UnstableError
from ..utils.parallel import ordered_map

logger = logging.getLogger(__name__)

KINDS = ("state_feedback", "observer", "estimation", "input", "composite")


class PhiValue(NamedTuple):
    """φ = φ_ξ + σ²·φ_η at one eigenvalue."""
    phi: float
    phi_xi: float
    phi_eta: float


def _require_hurwitz(M, lam, condition, message):
    if not is_hurwitz(M):
        raise UnstableError(f"{message} at lambda={lam:.17g}", lam=lam, condition=condition)


def _mode_covariances(s, K, lam):
    """Disturbance and noise parts (P_ξ, P_η) of the mode covariance at λ."""
    A_lam = decoupled_matrix(s, K, lam)
    _require_hurwitz(A_lam, lam, "A - lambda*B*K*H",
                     "below connectivity threshold: A - lambda*B*K*H is not Hurwitz")
    BKG = s.B @ K @ s.G
    P_xi, P_eta = solve_lyapunov_multi(A_lam, [s.E @ s.E.T, lam ** 2 * BKG @ BKG.T],
                                       check_stability=False)
    return P_xi, P_eta


def phi(s, K, lam):
    """
    Performance function Tr(C P Cᵀ), where
    (A − λBKH)P + P(A − λBKH)ᵀ + EEᵀ + λ²σ²BKG(BKG)ᵀ = 0.

    Returns:
        PhiValue(phi, phi_xi, phi_eta).

    Raises:
        UnstableError: A − λBKH is not Hurwitz.
    """
    K = check_gain(s, K)
    P_xi, P_eta = _mode_covariances(s, K, lam)
    phi_xi = float(np.trace(s.C @ P_xi @ s.C.T))
    phi_eta = float(np.trace(s.C @ P_eta @ s.C.T))
    return PhiValue(phi_xi + s.sigma ** 2 * phi_eta, phi_xi, phi_eta)


def phi_observer(s, K, F, lam):
    """φ of the observer-based relative output feedback, K in state-feedback form."""
    regulator, estimator = separation_blocks(s, K, F, lam)
    _require_hurwitz(regulator, lam, "A - B*K", "regulator A - B*K is not Hurwitz")
    _require_hurwitz(estimator, lam, "A - lambda*F*H", "estimator A - lambda*F*H is not Hurwitz")
    augmented = augment_observer(s, K, F)
    return phi(augmented, observer_gain_identity(augmented), lam)


def psi(s, F, lam, weight="output"):
    """
    Estimation function at λ.

    Q solves (A − λFH)Q + Q(A − λFH)ᵀ + EEᵀ + λ²σ²FGGᵀFᵀ = 0. With
    weight="output" the error is measured through C, Tr(CQCᵀ); with
    weight="state" the whole error state counts, Tr(Q).
    """
    if weight not in ("output", "state"):
        raise ModelValidationError(f"unknown weight '{weight}'", field="weight")
    F = check_observer_gain(s, F)
    A_lam = s.A - lam * F @ s.H
    _require_hurwitz(A_lam, lam, "A - lambda*F*H", "estimator A - lambda*F*H is not Hurwitz")
    FG = F @ s.G
    Q_xi, Q_eta = solve_lyapunov_multi(A_lam, [s.E @ s.E.T, lam ** 2 * FG @ FG.T], check_stability=False)
    W = s.C if weight == "output" else np.eye(s.n)
    psi_xi = float(np.trace(W @ Q_xi @ W.T))
    psi_eta = float(np.trace(W @ Q_eta @ W.T))
    return PhiValue(psi_xi + s.sigma ** 2 * psi_eta, psi_xi, psi_eta)


def phi_u(s, K, lam):
    """Input-variance function Tr(λ² K H P Hᵀ Kᵀ), P the full mode covariance."""
    K = check_gain(s, K)
    P_xi, P_eta = _mode_covariances(s, K, lam)
    KH = K @ s.H
    u_xi = float(lam ** 2 * np.trace(KH @ P_xi @ KH.T))
    u_eta = float(lam ** 2 * np.trace(KH @ P_eta @ KH.T))
    return PhiValue(u_xi + s.sigma ** 2 * u_eta, u_xi, u_eta)


class PerformanceFunction:
    """
    Evaluable handle on one of the per-eigenvalue functions.

    Calling the handle returns the scalar value; `evaluate` returns the
    PhiValue decomposition. `valid_from` is the connectivity threshold below
    which the function is undefined, computed on first use.
    """

    def __init__(self, kind, model, K=None, F=None, weight="output", composite=None):
        if kind not in KINDS:
            raise ModelValidationError(f"unknown performance function kind '{kind}'", field="kind")
        self.kind = kind
        self.model = model
        self.weight = weight
        self.composite = composite
        if kind == "observer":
            self.K = check_state_gain(model, K)
            self.F = check_observer_gain(model, F)
        elif kind == "estimation":
            self.K = None
            self.F = check_observer_gain(model, F)
        else:
            self.K = check_gain(model, K)
            self.F = None
        self._valid_from = None

    @classmethod
    def for_composite(cls, cs):
        return cls("composite", composite_matrices(cs), K=cs.K2, composite=cs)

    def __repr__(self):
        return f"PerformanceFunction(kind={self.kind}, model={self.model!r})"

    @property
    def system_order(self):
        """Order of the Lyapunov equation behind one evaluation; the observer doubles the state."""
        return 2 * self.model.n if self.kind == "observer" else self.model.n

    @property
    def valid_from(self):
        if self._valid_from is None:
            if self.kind in ("observer", "estimation"):
                self._valid_from = lambda_tilde_observer(self.model, self.F).lambda_tilde
            else:
                self._valid_from = lambda_tilde(self.model, self.K).lambda_tilde
            logger.debug(f"{self!r} valid from lambda > {self._valid_from}")
        return self._valid_from

    def evaluate(self, lam):
        if self.kind == "observer":
            return phi_observer(self.model, self.K, self.F, lam)
        if self.kind == "estimation":
            return psi(self.model, self.F, lam, weight=self.weight)
        if self.kind == "input":
            return phi_u(self.model, self.K, lam)
        return phi(self.model, self.K, lam)

    def __call__(self, lam):
        return self.evaluate(lam).phi

    def evaluate_many(self, lams, threads=None):
        return ordered_map(self.evaluate, list(lams), threads=threads)

# lapnet/performance/rational_fit.py
import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from ..utils.errors import FitConditioningError, ModelValidationError
from ..utils.schemas import DEFAULT_FIT_TOL

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class RationalFit:
    """
    p(λ)/q(λ) with coefficients in ascending degree and q monic.

    `residual` is the relative RMS error on the training points,
    `validation_error` the largest relative error on the held-out points.
    """
    numerator: np.ndarray
    denominator: np.ndarray
    residual: float
    validation_error: float
    condition_number: float
    accepted: bool

    @property
    def degrees(self):
        return len(self.numerator) - 1, len(self.denominator) - 1

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        return npoly.polyval(lam, self.numerator) / npoly.polyval(lam, self.denominator)

    def to_dict(self):
        return {"numerator": self.numerator, "denominator": self.denominator, "residual": self.residual,
                "validation_error": self.validation_error, "condition_number": self.condition_number,
                "accepted": self.accepted}


def default_samples(valid_from, max_degree):
    """4·(max_degree+1) log-spaced points over three decades above the threshold."""
    lo = max(0.1, 1.5 * float(valid_from))
    return np.logspace(np.log10(lo), np.log10(lo) + 3, 4 * (max_degree + 1))


def _relative_errors(fit_values, targets):
    scale = np.maximum(np.abs(targets), 1e-300)
    return np.abs(fit_values - targets) / scale


def _solve_linearized(lam, values, dp, dq, weights):
    """Least squares for p(λ) − φ·q(λ) = 0 with q monic; returns (p, q, condition)."""
    p_cols = np.vander(lam, dp + 1, increasing=True)
    q_cols = -values[:, None] * np.vander(lam, dq, increasing=True) if dq else np.zeros((len(lam), 0))
    design = np.hstack([p_cols, q_cols]) * weights[:, None]
    rhs = values * lam ** dq * weights
    norms = np.linalg.norm(design, axis=0)
    norms[norms == 0] = 1.0
    coeffs, _, _, singular = np.linalg.lstsq(design / norms, rhs, rcond=None)
    coeffs = coeffs / norms
    condition = float(singular[0] / singular[-1]) if singular.size and singular[-1] > 0 else np.inf
    p = coeffs[:dp + 1]
    q = np.append(coeffs[dp + 1:], 1.0)
    return p, q, condition


def _denominator_vanishes(q, lo, hi):
    grid = np.logspace(np.log10(lo), np.log10(hi), 200)
    values = npoly.polyval(grid, q)
    return np.any(values == 0) or np.any(np.sign(values) != np.sign(values[0]))


def _fit_degrees(lam, values, dp, dq):
    """Linearized fit followed by one pass reweighted by 1/q(λ)²."""
    ones = np.ones_like(lam)
    p, q, condition = _solve_linearized(lam, values, dp, dq, ones)
    q_at = npoly.polyval(lam, q)
    if np.all(q_at != 0):
        p2, q2, condition2 = _solve_linearized(lam, values, dp, dq, 1.0 / np.abs(q_at))
        if np.all(np.isfinite(p2)) and np.all(np.isfinite(q2)):
            p, q, condition = p2, q2, condition2
    return p, q, condition


def fit_rational(pf, lambda_samples=None, max_degree=4, tol=DEFAULT_FIT_TOL):
    """
    Recovers the rational form of a performance function from samples.

    Even-indexed samples train, odd-indexed samples validate. Degree pairs are
    tried by increasing total degree; the first pair whose held-out relative
    error is below `tol` wins.

    Args:
        pf: callable λ -> φ(λ); a `valid_from` attribute, when present, bounds
            the admissible samples from below.
        lambda_samples: sample points, default log-spaced (see default_samples).
        max_degree: largest numerator and denominator degree considered.

    Raises:
        ModelValidationError: samples at or below the threshold, too few
            samples, or max_degree above the square of the solved system order
            (2n for observer-based feedback).
        FitConditioningError: no degree pair validates and the best
            candidate is ill-conditioned.
    """
    valid_from = float(getattr(pf, "valid_from", 0.0) or 0.0)
    order = getattr(pf, "system_order", None)
    if order is not None and max_degree > order ** 2:
        raise ModelValidationError(f"max_degree {max_degree} exceeds the squared system order {order ** 2}", field="max_degree")
    lam = np.asarray(default_samples(valid_from, max_degree) if lambda_samples is None else lambda_samples,
                     dtype=float)
    if np.any(lam <= valid_from):
        raise ModelValidationError(f"all samples must exceed the threshold {valid_from}", field="lambda_samples")
    lam = np.sort(lam)
    if len(lam) < 4:
        raise ModelValidationError("at least four samples are required", field="lambda_samples")
    values = np.array([float(pf(x)) for x in lam])
    train, held_out = slice(0, None, 2), slice(1, None, 2)

    best = None
    for total in range(0, 2 * max_degree + 1):
        for dq in range(min(total, max_degree), -1, -1):
            dp = total - dq
            if dp > max_degree or dp + dq + 1 > len(lam[train]):
                continue
            p, q, condition = _fit_degrees(lam[train], values[train], dp, dq)
            if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
                continue
            if dq and _denominator_vanishes(q, lam[0], lam[-1]):
                continue
            fitted = npoly.polyval(lam, p) / npoly.polyval(lam, q)
            residual = float(np.sqrt(np.mean(_relative_errors(fitted[train], values[train]) ** 2)))
            validation = float(np.max(_relative_errors(fitted[held_out], values[held_out])))
            candidate = RationalFit(numerator=p, denominator=q, residual=residual, validation_error=validation,
                                    condition_number=condition, accepted=validation < tol)
            if candidate.accepted:
                logger.info(f"Rational fit accepted with degrees ({dp}, {dq}), held-out error {validation:.2e}")
                return candidate
            if best is None or validation < best.validation_error:
                best = candidate

    if best is None or best.condition_number > CONDITION_LIMIT:
        condition = None if best is None else best.condition_number
        raise FitConditioningError(
            f"rational fit failed; best candidate condition number {condition}", condition_number=condition)
    logger.warning(f"No degree pair up to {max_degree} validated below {tol}; "
                   f"returning best fit with held-out error {best.validation_error:.2e}")
    return best

# lapnet/design/threshold.py
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..linalg.kernels import is_hurwitz
from ..model.network import decoupled_matrix
from ..model.subsystem import check_gain, check_observer_gain
from ..utils.schemas import (DEFAULT_HURWITZ_MARGIN, DEFAULT_THRESHOLD_POINTS, DEFAULT_THRESHOLD_SCAN_MAX,
                             DEFAULT_THRESHOLD_SCAN_MIN, DEFAULT_THRESHOLD_TOL)

logger = logging.getLogger(__name__)

SCAN_CAVEAT = ("Stability is checked on a finite log-spaced grid up to scan_max; "
               "it is not certified for every lambda above lambda_tilde, nor at lambda_tilde itself.")


@dataclass(frozen=True)
class ThresholdResult:
    """Minimum connectivity threshold found by grid scan and bisection."""
    lambda_tilde: float
    scan_max: float
    refined: bool
    unstable_witness: Optional[float] = None
    verified: bool = True

    @property
    def bounded(self):
        return math.isfinite(self.lambda_tilde)

    def to_dict(self):
        return {
            "lambda_tilde": self.lambda_tilde,
            "bounded": self.bounded,
            "scan_max": self.scan_max,
            "refined": self.refined,
            "unstable_witness": self.unstable_witness,
            "verified": self.verified,
            "caveat": SCAN_CAVEAT,
        }


def scan_threshold(matrix_at, scan_max=DEFAULT_THRESHOLD_SCAN_MAX, tol=DEFAULT_THRESHOLD_TOL,
                   points=DEFAULT_THRESHOLD_POINTS, margin=DEFAULT_HURWITZ_MARGIN,
                   scan_min=DEFAULT_THRESHOLD_SCAN_MIN):
    """
    Smallest λ above which matrix_at(λ) stays Hurwitz on the scanned grid.

    The grid is log-spaced over [scan_min, scan_max]. The last unstable grid
    point and its stable successor are bisected to `tol` (relative to the
    bracket scale); the stable end is returned.
    """
    points = max(int(points), 200)
    grid = np.logspace(np.log10(scan_min), np.log10(scan_max), points)
    stable = [is_hurwitz(matrix_at(lam), margin) for lam in grid]

    if all(stable):
        logger.debug("Stable on the whole grid; lambda_tilde = 0")
        return ThresholdResult(lambda_tilde=0.0, scan_max=float(scan_max), refined=False)
    last_unstable = max(i for i, ok in enumerate(stable) if not ok)
    if last_unstable == len(grid) - 1:
        logger.info(f"Unstable at scan_max={scan_max:g}; no bounded stability region found")
        return ThresholdResult(lambda_tilde=math.inf, scan_max=float(scan_max), refined=False,
                               unstable_witness=float(grid[-1]), verified=False)

    lo, hi = float(grid[last_unstable]), float(grid[last_unstable + 1])
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if is_hurwitz(matrix_at(mid), margin):
            hi = mid
        else:
            lo = mid
    verified = (is_hurwitz(matrix_at(hi * (1 + 1e-6)), 0.0)
                and is_hurwitz(matrix_at(float(scan_max)), 0.0))
    if not verified:
        logger.warning(f"Threshold {hi:.10g} could not be re-verified above the bracket")
    return ThresholdResult(lambda_tilde=hi, scan_max=float(scan_max), refined=True,
                           unstable_witness=lo, verified=verified)


def lambda_tilde(s, K, scan_max=DEFAULT_THRESHOLD_SCAN_MAX, tol=DEFAULT_THRESHOLD_TOL,
                 points=DEFAULT_THRESHOLD_POINTS, margin=DEFAULT_HURWITZ_MARGIN):
    """Minimum connectivity threshold of A − λBKH."""
    K = check_gain(s, K)
    result = scan_threshold(lambda lam: decoupled_matrix(s, K, lam), scan_max=scan_max, tol=tol,
                            points=points, margin=margin)
    logger.debug(f"lambda_tilde(K) = {result.lambda_tilde}")
    return result


def lambda_tilde_observer(s, F, scan_max=DEFAULT_THRESHOLD_SCAN_MAX, tol=DEFAULT_THRESHOLD_TOL,
                          points=DEFAULT_THRESHOLD_POINTS, margin=DEFAULT_HURWITZ_MARGIN):
    """Threshold of the estimator matrix A − λFH."""
    F = check_observer_gain(s, F)
    return scan_threshold(lambda lam: s.A - lam * F @ s.H, scan_max=scan_max, tol=tol,
                          points=points, margin=margin)

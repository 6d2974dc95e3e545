# lapnet/bounds/lower_bounds.py
import logging
from dataclasses import dataclass

import numpy as np

from ..utils.errors import ConvexityError, ModelValidationError
from ..utils.schemas import DEFAULT_CONVEXITY_TOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LowerBound:
    value: float
    equality_expected: bool = False


def _valid_from(pf):
    return float(getattr(pf, "valid_from", 0.0) or 0.0)


def check_convex(pf, upper, points=200, tol=DEFAULT_CONVEXITY_TOL):
    """
    Numerical convexity test of pf on [max(1e−3, λ̃ + 1e−3), upper].

    Secant slopes over a log-spaced grid must be non-decreasing, up to a
    relative tolerance.

    Raises:
        ConvexityError: a slope decreases beyond the tolerance.
    """
    lo = max(1e-3, _valid_from(pf) + 1e-3)
    hi = max(float(upper), lo * 10)
    grid = np.logspace(np.log10(lo), np.log10(hi), points)
    values = np.array([pf(x) for x in grid])
    slopes = np.diff(values) / np.diff(grid)
    drops = slopes[:-1] - slopes[1:]
    allowed = tol * (np.abs(slopes[:-1]) + np.abs(slopes[1:])) + 1e-12
    bad = np.nonzero(drops > allowed)[0]
    if bad.size:
        where = grid[bad[0] + 1]
        raise ConvexityError(f"bound requires convex phi; convexity fails near lambda={where:.6g}")
    return True


def lower_bound_unweighted(pf, N, M, Delta, check=True):
    """
    φ(1+Δ) + (N−2)·φ((2M−1−Δ)/(N−2)) ≤ ρ over unweighted connected graphs
    with N nodes, M edges and maximum degree Δ. Tight for complete and star
    graphs.
    """
    if N < 3:
        raise ModelValidationError("the unweighted bound needs N >= 3", field="N")
    if not (N - 1 <= M <= N * (N - 1) // 2) or not (1 <= Delta <= N - 1):
        raise ModelValidationError(f"no connected graph has N={N}, M={M}, Delta={Delta}", field="M")
    if check:
        check_convex(pf, N)
    spread = (2 * M - 1 - Delta) / (N - 2)
    value = pf(1 + Delta) + (N - 2) * pf(spread)
    equality = M == N * (N - 1) // 2 or (M == N - 1 and Delta == N - 1)
    return LowerBound(value=float(value), equality_expected=bool(equality))


def lower_bound_weighted(pf, N, W, check=True):
    """(N−1)·φ(2W/(N−1)) ≤ ρ over weighted graphs with total weight W; tight for uniform complete graphs."""
    if N < 2:
        raise ModelValidationError("the weighted bound needs N >= 2", field="N")
    if not W > 0:
        raise ModelValidationError("total weight must be positive", field="W")
    if check:
        check_convex(pf, 2 * W)
    return LowerBound(value=float((N - 1) * pf(2 * W / (N - 1))))


def sparsity_bound(pf, N, M, check=True):
    """(N−1)·φ(2M/(N−1)): fewer edges force a larger ρ for decreasing convex φ."""
    return lower_bound_weighted(pf, N, M, check=check)


def weighted_scaling(pf, N, W):
    """N·φ(W/N), the order of the weighted bound for large N."""
    return float(N * pf(W / N))


def bounds_for_graph(pf, g, check=False):
    """Both bounds evaluated on a connected graph's N, M, Δ and W."""
    N, M = g.n_nodes, g.n_edges
    weighted = lower_bound_weighted(pf, N, g.total_weight, check=check)
    unweighted = None
    if N >= 3 and g.is_unweighted():
        unweighted = lower_bound_unweighted(pf, N, M, g.max_degree, check=check)
    return unweighted, weighted

# lapnet/bounds/asymptotics.py
import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from tqdm import tqdm

from ..graph.weighted_graph import generate
from ..performance.functions import PerformanceFunction
from ..performance.measures import rho_spectral
from ..utils.errors import ModelValidationError, QuadratureError
from ..utils.schemas import DEFAULT_QUAD_TOL

logger = logging.getLogger(__name__)


def _breakpoints(N, start=1):
    """start/N, 2·start/N, 4·start/N, … , 1."""
    points = [start / N]
    while points[-1] * 2 < 1.0:
        points.append(points[-1] * 2)
    points.append(1.0)
    return points


def gamma_N(pf, N, quad_tol=DEFAULT_QUAD_TOL, start=1):
    """
    Γ_N = ∫_{start/N}^{1} φ(2 − 2cos(πx)) dx.

    start = 1 matches the path spectrum 2 − 2cos(πk/N); cycles use start = 2,
    since their eigenvalues 2 − 2cos(2πk/N) put the smallest one at x = 2/N.
    The interval is split geometrically from the lower end, where φ grows fastest,
    and each piece is integrated adaptively.

    Raises:
        ModelValidationError: φ has a positive connectivity threshold, N < 2 or N <= start.
        QuadratureError: a piece fails to reach the requested accuracy.
    """
    if N < 2 or start >= N:
        raise ModelValidationError(f"gamma_N needs N > max(1, start), got N={N}, start={start}", field="N")
    if float(getattr(pf, "valid_from", 0.0) or 0.0) > 0:
        raise ModelValidationError("gamma_N requires lambda_tilde = 0", field="pf")

    def integrand(x):
        return pf(2.0 - 2.0 * np.cos(np.pi * x))

    total = 0.0
    edges = _breakpoints(N, start)
    for a, b in zip(edges[:-1], edges[1:]):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", integrate.IntegrationWarning)
            value, abserr = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=quad_tol, limit=200)
        if caught and abserr > 1e3 * quad_tol * max(abs(value), 1e-300):
            raise QuadratureError(f"quadrature on [{a:.6g}, {b:.6g}] failed: {caught[0].message}")
        total += value
    return float(total)


@dataclass(frozen=True)
class RatioRow:
    N: int
    rho: float
    n_gamma: float
    ratio: float


def path_cycle_ratio_experiment(s, K, N_list, kind="path", progress=False):
    """
    Table of (N, ρ, N·Γ_N, N·Γ_N/ρ) over `N_list` for path or cycle graphs.

    Cycles integrate from 2/N, the first nonzero cycle eigenvalue.

    Raises:
        ModelValidationError: the gain has a positive threshold.
    """
    pf = PerformanceFunction("state_feedback", s, K=K)
    if pf.valid_from > 0:
        raise ModelValidationError("the ratio experiment requires lambda_tilde(K) = 0", field="K")
    rows = []
    for N in tqdm(list(N_list), desc=f"{kind} sizes", disable=not progress):
        rho = rho_spectral(s, generate(kind, N), K).total
        n_gamma = N * gamma_N(pf, N, start=2 if kind == "cycle" else 1)
        rows.append(RatioRow(N=int(N), rho=rho, n_gamma=n_gamma, ratio=n_gamma / rho if rho else float("nan")))
        logger.debug(f"N={N}: rho={rho:.10g}, N*Gamma_N={n_gamma:.10g}")
    return rows


def loglog_slope(xs, ys):
    """Least-squares slope of log y against log x, the executable form of a Θ(N^k) claim."""
    slope, _ = np.polyfit(np.log(np.asarray(xs, dtype=float)), np.log(np.asarray(ys, dtype=float)), 1)
    return float(slope)

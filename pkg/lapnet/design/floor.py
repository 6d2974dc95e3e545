# lapnet/design/floor.py
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..linalg.riccati import is_detectable, is_stabilizable, solve_care
from ..utils.errors import ModelValidationError, NotStabilizableError, NumericalFailure
from ..utils.schemas import DEFAULT_FLOOR_CONVERGENCE_TOL, DEFAULT_FLOOR_EPS_SCHEDULE

logger = logging.getLogger(__name__)

SIDES = ("control", "estimation")


@dataclass(frozen=True)
class PerformanceFloor:
    """
    Cheap-gain limit of the parametric Riccati solution.

    P0 is the solution at the smallest ε that succeeded; `extrapolated` is the
    linear extrapolation to ε = 0 from the last two solutions.
    """
    side: str
    P0: np.ndarray
    epsilon_trace: tuple
    converged: bool
    extrapolated: Optional[np.ndarray] = None
    failed_eps: tuple = ()

    def to_dict(self):
        return {"side": self.side, "P0": self.P0, "extrapolated": self.extrapolated,
                "epsilon_trace": [{"epsilon": e, "trace": t} for e, t in self.epsilon_trace],
                "converged": self.converged, "failed_eps": list(self.failed_eps)}


def _riccati_data(s, side):
    if side == "control":
        if not is_stabilizable(s.A, s.B):
            raise NotStabilizableError("not stabilizable: (A, B)")
        if not is_detectable(s.A, s.C):
            raise NotStabilizableError("not detectable: (A, C)")
        return s.A, s.B, s.C.T @ s.C
    if not is_stabilizable(s.A, s.E):
        raise NotStabilizableError("not stabilizable: (A, E)")
    if not is_detectable(s.A, s.H):
        raise NotStabilizableError("not detectable: (A, H)")
    return s.A.T, s.H.T, s.E @ s.E.T


def performance_floor(s, side="control", eps_schedule=None, convergence_tol=DEFAULT_FLOOR_CONVERGENCE_TOL):
    """
    Solves AᵀP + PA + CᵀC − ε⁻²PBBᵀP = 0 along a decreasing ε schedule
    (estimation side: the dual equation in (Aᵀ, Hᵀ, EEᵀ)).

    Converged means the last two traces agree to `convergence_tol`
    (relative, with an absolute floor of the same size) and the linear
    extrapolation to ε = 0 agrees with the last solution to the same tolerance.
    An ARE failure at some ε stops the schedule and flags the result
    unconverged.
    """
    if side not in SIDES:
        raise ModelValidationError(f"side must be one of {SIDES}, got '{side}'", field="side")
    schedule = sorted(DEFAULT_FLOOR_EPS_SCHEDULE if eps_schedule is None else eps_schedule, reverse=True)
    if len(schedule) < 2 or schedule[-1] <= 0:
        raise ModelValidationError("eps_schedule needs at least two positive values", field="eps_schedule")
    A, B, Q = _riccati_data(s, side)

    solutions, trace, failed = [], [], []
    for eps in schedule:
        try:
            P = solve_care(A, B, eps ** -2, Q)
        except NumericalFailure as e:
            logger.warning(f"Riccati solve failed at epsilon={eps:g}: {e}")
            failed.append(eps)
            break
        solutions.append((eps, P))
        trace.append((eps, float(np.trace(P))))
        logger.debug(f"epsilon={eps:g}: trace {trace[-1][1]:.10g}")

    if not solutions:
        raise NumericalFailure("performance floor: Riccati equation failed at every epsilon")
    P0 = solutions[-1][1]
    extrapolated = None
    converged = False
    if len(solutions) >= 2 and not failed:
        (eps_prev, P_prev), (eps_last, P_last) = solutions[-2], solutions[-1]
        extrapolated = P_last + (P_last - P_prev) * eps_last / (eps_prev - eps_last)
        t_prev, t_last = trace[-2][1], trace[-1][1]
        scale = max(1.0, abs(t_last))
        traces_agree = abs(t_last - t_prev) < convergence_tol * scale
        extrapolation_agrees = np.linalg.norm(extrapolated - P_last) < convergence_tol * max(1.0, np.linalg.norm(P_last))
        converged = bool(traces_agree and extrapolation_agrees)
    if not converged:
        logger.warning(f"Performance floor ({side}) did not converge over epsilon down to {trace[-1][0]:g}")
    return PerformanceFloor(side=side, P0=P0, epsilon_trace=tuple(trace), converged=converged,
                            extrapolated=extrapolated, failed_eps=tuple(failed))


def floor_value(floor, weight=None):
    """
    Control side: Tr(EᵀP₀E) with E = `weight` (the disturbance map).
    Estimation side: Tr(W S₀ Wᵀ), W = `weight` or the identity.
    """
    P0 = floor.P0
    if floor.side == "control":
        if weight is None:
            raise ModelValidationError("the control-side floor needs the disturbance map E", field="E")
        return float(np.trace(weight.T @ P0 @ weight))
    W = np.eye(P0.shape[0]) if weight is None else weight
    return float(np.trace(W @ P0 @ W.T))

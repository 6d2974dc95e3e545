# lapnet/simulate/sde.py
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from ..linalg.kernels import is_hurwitz, spectral_abscissa
from ..model.network import project_consensus
from ..utils.errors import ModelValidationError, SimulationDivergence, UnstableError
from ..utils.parallel import ordered_map
from ..utils.schemas import DEFAULT_SIM_DIVERGENCE_NORM, DEFAULT_SIM_PATHS

logger = logging.getLogger(__name__)

BLOCK_STEPS = 8192
TRAJECTORY_POINTS = 1000


@dataclass(frozen=True)
class SimulationConfig:
    """
    Euler–Maruyama settings. Unset dt, t_end and burn_in are derived from the
    network in resolve().
    """
    dt: Optional[float] = None
    t_end: Optional[float] = None
    burn_in: Optional[float] = None
    n_paths: int = DEFAULT_SIM_PATHS
    seed: int = 0
    divergence_norm: float = DEFAULT_SIM_DIVERGENCE_NORM

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ModelValidationError(f"dt must be positive, got {self.dt}", field="dt")
        if self.t_end is not None and not self.t_end > 0:
            raise ModelValidationError(f"t_end must be positive, got {self.t_end}", field="t_end")
        if self.burn_in is not None and self.burn_in < 0:
            raise ModelValidationError(f"burn_in must be non-negative, got {self.burn_in}", field="burn_in")
        if self.t_end is not None and self.burn_in is not None and self.burn_in >= self.t_end:
            raise ModelValidationError("burn_in must be smaller than t_end", field="burn_in")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ModelValidationError(f"n_paths must be a positive integer, got {self.n_paths}", field="n_paths")

    def resolve(self, A):
        """
        Concrete (dt, t_end, burn_in) for a drift matrix A.

        dt = 0.01/max(1, ‖A‖₂), t_end = 200/min|Re eig(A)|, burn_in = t_end/10.
        """
        norm = float(np.linalg.norm(A, 2)) if A.size else 0.0
        dt = self.dt if self.dt is not None else 0.01 / max(1.0, norm)
        if norm * dt >= 0.1:
            logger.warning(f"dt={dt:g} violates the step guard: |A|*dt = {norm * dt:.3g} >= 0.1")
        t_end = self.t_end
        if t_end is None:
            slowest = float(np.min(np.abs(np.linalg.eigvals(A).real))) if A.size else 1.0
            t_end = 200.0 / max(slowest, 1e-12)
        burn_in = self.burn_in if self.burn_in is not None else 0.1 * t_end
        if burn_in >= t_end:
            raise ModelValidationError("burn_in must be smaller than t_end", field="burn_in")
        return dt, t_end, burn_in


@njit(nogil=True, cache=True)
def _advance(A, B, C, z, noise, dt, sqrt_dt, record_from, limit):
    """
    Euler–Maruyama steps z ← z + A z dt + B dW for every row of `noise`.

    Returns (sum of ‖C z‖² over steps with index ≥ record_from, diverged).
    """
    n = z.shape[0]
    m = noise.shape[1]
    r = C.shape[0]
    step = np.empty(n)
    total = 0.0
    for k in range(noise.shape[0]):
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * z[j]
            acc *= dt
            for j in range(m):
                acc += B[i, j] * noise[k, j] * sqrt_dt
            step[i] = acc
        norm2 = 0.0
        for i in range(n):
            z[i] += step[i]
            norm2 += z[i] * z[i]
        if norm2 > limit * limit:
            return total, True
        if k >= record_from:
            for i in range(r):
                y = 0.0
                for j in range(n):
                    y += C[i, j] * z[j]
                total += y * y
    return total, False


@njit(nogil=True, cache=True)
def _advance_recording(A, B, C, x, noise, dt, sqrt_dt, every, phase, out):
    """Like _advance, storing C x into `out` every `every` steps; returns (rows written, diverged)."""
    n = x.shape[0]
    m = noise.shape[1]
    r = C.shape[0]
    step = np.empty(n)
    written = 0
    for k in range(noise.shape[0]):
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * x[j]
            acc *= dt
            for j in range(m):
                acc += B[i, j] * noise[k, j] * sqrt_dt
            step[i] = acc
        for i in range(n):
            x[i] += step[i]
            if not np.isfinite(x[i]):
                return written, True
        if (phase + k + 1) % every == 0:
            for i in range(r):
                y = 0.0
                for j in range(n):
                    y += C[i, j] * x[j]
                out[written, i] = y
            written += 1
    return written, False


def _path_generators(seed, n_paths):
    """
    Independent Philox streams per path index, derived from the seed alone.

    Each path gets a (disturbance, measurement noise) pair of streams, so the
    disturbance samples do not depend on how many noise channels a network has.
    """
    streams = []
    for child in np.random.SeedSequence(seed).spawn(n_paths):
        disturbance, noise = child.spawn(2)
        streams.append((np.random.Generator(np.random.Philox(disturbance)),
                        np.random.Generator(np.random.Philox(noise))))
    return streams


def _draw(streams, block, n_dist, n_noise):
    disturbance, noise = streams
    return np.hstack([disturbance.standard_normal((block, n_dist)), noise.standard_normal((block, n_noise))])


def simulate_variance(net, cfg=None, threads=None):
    """
    Monte-Carlo estimate of the steady-state output variance E‖ν‖².

    Integrates the consensus-orthogonal part of the closed loop from rest,
    time-averages ‖ν‖² after the burn-in on every path and averages across
    paths.

    Returns:
        (estimate, standard error of the path means).

    Raises:
        UnstableError: the projected dynamics are not Hurwitz.
        SimulationDivergence: a path's state norm exceeds cfg.divergence_norm.
    """
    cfg = cfg or SimulationConfig()
    A_p, B_p, C_p, _ = project_consensus(net)
    if A_p.size == 0 or not np.any(B_p) or not np.any(C_p):
        return 0.0, 0.0
    if not is_hurwitz(A_p):
        raise UnstableError(f"closed loop is unstable (spectral abscissa {spectral_abscissa(A_p):.6g})",
                            condition="projected A_cl")
    dt, t_end, burn_in = cfg.resolve(A_p)
    n_steps = int(round(t_end / dt))
    record_from = int(round(burn_in / dt))
    recorded = n_steps - record_from
    A = np.ascontiguousarray(A_p)
    B = np.ascontiguousarray(B_p)
    C = np.ascontiguousarray(C_p)
    n_dist = net.E_dist.shape[1]
    sqrt_dt = np.sqrt(dt)
    logger.info(f"Simulating {cfg.n_paths} paths: dt={dt:.4g}, t_end={t_end:.4g}, burn_in={burn_in:.4g}, "
                f"{n_steps} steps")

    def run_path(item):
        index, streams = item
        z = np.zeros(A.shape[0])
        total = 0.0
        done = 0
        while done < n_steps:
            block = min(BLOCK_STEPS, n_steps - done)
            noise = _draw(streams, block, n_dist, B.shape[1] - n_dist)
            part, diverged = _advance(A, B, C, z, noise, dt, sqrt_dt, record_from - done, cfg.divergence_norm)
            if diverged:
                raise SimulationDivergence(f"path {index} diverged near t={(done + block) * dt:.6g}")
            total += part
            done += block
        return total / recorded

    means = np.array(ordered_map(run_path, list(enumerate(_path_generators(cfg.seed, cfg.n_paths))),
                                 threads=threads))
    estimate = float(np.mean(means))
    stderr = float(np.std(means, ddof=1) / np.sqrt(len(means))) if len(means) > 1 else float("nan")
    logger.info(f"Simulated variance {estimate:.6g} +/- {stderr:.3g}")
    return estimate, stderr


def simulate_trajectory(net, cfg=None, x0=None):
    """
    One sample path of the full closed loop started from x0.

    Uses the first path streams of cfg.seed, so two networks with the same node
    count and disturbance dimension see identical disturbance samples.

    Returns:
        rows (t, node, output_component, value) at about TRAJECTORY_POINTS
        evenly spaced times, t = 0 included.
    """
    cfg = cfg or SimulationConfig()
    n_total = net.A_cl.shape[0]
    x = np.zeros(n_total) if x0 is None else np.array(x0, dtype=float).ravel()
    if x.shape != (n_total,):
        raise ModelValidationError(f"x0 must have {n_total} entries, got {x.size}", field="x0")
    A_p, _, _, _ = project_consensus(net)
    dt, t_end, _ = cfg.resolve(A_p if A_p.size else net.A_cl)
    n_steps = int(round(t_end / dt))
    every = max(1, n_steps // TRAJECTORY_POINTS)
    A = np.ascontiguousarray(net.A_cl)
    B = np.ascontiguousarray(net.inputs)
    C = np.ascontiguousarray(net.C_out)
    outputs_per_node = C.shape[0] // net.n_nodes
    streams = _path_generators(cfg.seed, 1)[0]
    n_dist = net.E_dist.shape[1]

    samples = [(0.0, C @ x)]
    done = 0
    while done < n_steps:
        block = min(BLOCK_STEPS, n_steps - done)
        noise = _draw(streams, block, n_dist, B.shape[1] - n_dist)
        out = np.empty((block // every + 1, C.shape[0]))
        written, diverged = _advance_recording(A, B, C, x, noise, dt, np.sqrt(dt), every, done, out)
        if diverged:
            raise SimulationDivergence(f"trajectory diverged near t={(done + block) * dt:.6g}")
        first = (every - done % every) % every or every
        for w in range(written):
            samples.append(((done + first + w * every) * dt, out[w]))
        done += block

    rows = []
    for t, y in samples:
        for node in range(net.n_nodes):
            for component in range(outputs_per_node):
                rows.append((float(t), node, component, float(y[node * outputs_per_node + component])))
    return rows

# lapnet/composite/networks.py
import logging
from dataclasses import dataclass

import numpy as np

from ..design.threshold import lambda_tilde
from ..graph.weighted_graph import WeightedGraph, graph_spectrum
from ..linalg.kernels import is_hurwitz
from ..model.composite_model import composite_matrices
from ..model.network import assemble_full, centering_matrix, decoupled_matrix, with_output
from ..performance.functions import phi
from ..performance.measures import SpectralSum, network_h2, rho_oracle, rho_spectral, spectral_sum
from ..utils.errors import ModelValidationError, UnstableError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompositeMeasure:
    """ρ_nn split into the module-internal part and the higher-level spectral sum."""
    inner: SpectralSum
    higher: SpectralSum

    @property
    def total(self):
        return self.inner.total + self.higher.total

    def to_dict(self):
        return {"rho_nn": self.total, "inner": self.inner.to_dict("rho"),
                "higher": self.higher.to_dict("rho")}


def check_inner_stable(cs):
    """Raises UnstableError unless every non-consensus mode of one module is Hurwitz."""
    for index, lam in enumerate(graph_spectrum(cs.g1).nonzero_index_eigenvalues, start=2):
        if not is_hurwitz(decoupled_matrix(cs.inner, cs.K1, lam)):
            raise UnstableError(f"inner network unstable at mode {index} (lambda={lam:.17g})",
                                lam=float(lam), condition="inner")


def phi_nn(cs, lam):
    """φ of the module-level subsystem under K2 at eigenvalue λ of the higher-level graph."""
    check_inner_stable(cs)
    return phi(composite_matrices(cs), cs.K2, lam)


def rho_nn(cs, threads=None):
    """ρ_nn = ρ(L₁, K₁) + Σ_{i≥2} φ_nn(λᵢ(L₂))."""
    check_inner_stable(cs)
    inner = rho_spectral(cs.inner, cs.g1, cs.K1, threads=threads)
    module = composite_matrices(cs)
    try:
        higher = spectral_sum(lambda lam: phi(module, cs.K2, lam), cs.g2, threads=threads)
    except UnstableError as e:
        raise UnstableError(f"higher level: {e}", lam=e.lam, condition="higher") from e
    result = CompositeMeasure(inner=inner, higher=higher)
    logger.info(f"rho_nn = {result.total:.10g} (inner {inner.total:.10g}, higher {higher.total:.10g})")
    return result


def composite_threshold(cs):
    """
    λ̃ of the module-level subsystem with respect to the higher-level
    eigenvalues, for K2 = α·K1.

    Raises:
        ModelValidationError: K2 is not a positive multiple of K1.
        UnstableError: the inner gain has no bounded stability region.
    """
    alpha = cs.proportional_factor()
    if alpha is None:
        raise ModelValidationError("composite threshold requires K2 = alpha*K1 with alpha > 0", field="K2")
    inner_threshold = lambda_tilde(cs.inner, cs.K1)
    if not inner_threshold.bounded:
        raise UnstableError("inner threshold is infinite; K1 has no bounded stability region",
                            condition="inner")
    result = lambda_tilde(composite_matrices(cs), cs.K2)
    logger.info(f"composite threshold {result.lambda_tilde} (alpha={alpha:g}, inner {inner_threshold.lambda_tilde})")
    return result


def flatten(cs):
    """
    Single-level graph equivalent to the composite when K2 = α·K1.

    Node b of module a becomes node a·m + b; module copies of g1 are joined by
    the higher-level edges between port nodes with weights scaled by α.
    """
    alpha = cs.proportional_factor()
    if alpha is None:
        raise ModelValidationError("flattening requires K2 = alpha*K1 with alpha > 0", field="K2")
    m = cs.m
    edges = [(a * m + i, a * m + j, w) for a in range(cs.N) for i, j, w in cs.g1.edges]
    edges += [(a * m + cs.port, b * m + cs.port, alpha * w) for a, b, w in cs.g2.edges]
    return WeightedGraph(cs.N * m, edges)


def rho_nn_flattened_oracle(cs):
    return rho_oracle(cs.inner, flatten(cs), cs.K1)


def rho_nn_general_oracle(cs):
    """Direct solve on the assembled N·m·n-state network, for any K2."""
    check_inner_stable(cs)
    module = composite_matrices(cs)
    net = assemble_full(module, cs.g2, cs.K2)
    n_nodes = cs.N * cs.m
    net = with_output(net, np.kron(centering_matrix(n_nodes), cs.inner.C), n_nodes, cs.inner.n)
    return network_h2(net)

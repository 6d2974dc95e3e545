# lapnet/model/composite_model.py
import logging

import numpy as np

from .subsystem import SubsystemModel, check_gain
from ..graph.weighted_graph import WeightedGraph, laplacian
from ..utils.errors import ModelValidationError

logger = logging.getLogger(__name__)


class CompositeSpec:
    """
    Network of networks: N identical modules, each a network of m inner
    subsystems over g1 with gain K1, coupled over g2 with gain K2 through one
    port node per module.
    """

    def __init__(self, inner, g1, K1, g2, K2, port=None):
        self.inner = inner
        self.g1 = g1
        self.g2 = g2
        self.K1 = check_gain(inner, K1, "K1")
        self.K2 = check_gain(inner, K2, "K2")
        self.port = g1.n_nodes - 1 if port is None else int(port)
        if not 0 <= self.port < g1.n_nodes:
            raise ModelValidationError(f"port {self.port} outside 0..{g1.n_nodes - 1}", field="port")
        if inner.sigma > 0:
            raise ModelValidationError("composite networks are analyzed without measurement noise (sigma = 0)",
                                       field="sigma")

    @property
    def m(self):
        return self.g1.n_nodes

    @property
    def N(self):
        return self.g2.n_nodes

    def __repr__(self):
        return f"CompositeSpec(m={self.m}, N={self.N}, port={self.port}, inner={self.inner!r})"

    def proportional_factor(self, rtol=1e-12):
        """α with K2 = α·K1, or None when the gains are not proportional."""
        k1_norm_sq = float(np.sum(self.K1 * self.K1))
        if k1_norm_sq == 0:
            return None
        alpha = float(np.sum(self.K1 * self.K2)) / k1_norm_sq
        if alpha > 0 and np.allclose(self.K2, alpha * self.K1, rtol=rtol, atol=rtol * np.abs(self.K2).max()):
            return alpha
        return None


def relabel_port_last(g, port):
    """Swaps node `port` with the last node."""
    last = g.n_nodes - 1
    if port == last:
        return g
    mapping = {port: last, last: port}
    return WeightedGraph(g.n_nodes, [(mapping.get(i, i), mapping.get(j, j), w) for i, j, w in g.edges])


def composite_matrices(cs):
    """
    Module-level realization treating each module as one super-subsystem.

    Ã = I_m⊗A − L₁⊗BK₁H, B̃ = e_m⊗B, Ẽ = I_m⊗E, H̃ = e_mᵀ⊗H, C̃ = I_m⊗C,
    with the port relabeled to the last node.
    """
    s = cs.inner
    m = cs.m
    g1 = relabel_port_last(cs.g1, cs.port)
    L1 = laplacian(g1)
    e_m = np.zeros((m, 1))
    e_m[-1, 0] = 1.0
    return SubsystemModel(
        A=np.kron(np.eye(m), s.A) - np.kron(L1, s.B @ cs.K1 @ s.H),
        B=np.kron(e_m, s.B),
        E=np.kron(np.eye(m), s.E),
        H=np.kron(e_m.T, s.H),
        C=np.kron(np.eye(m), s.C),
        sigma=0.0,
        G=s.G,
        name=f"composite({s.name})" if s.name else "composite",
    )

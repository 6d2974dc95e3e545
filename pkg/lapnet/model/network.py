# lapnet/model/network.py
import dataclasses
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .subsystem import SubsystemModel, check_gain, check_observer_gain, check_state_gain
from ..graph.weighted_graph import is_connected, laplacian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosedLoopNetwork:
    """
    Structured matrices of the whole closed loop

        ẋ = A_cl x + E_dist ξ + E_noise η,   ν = C_out x

    with node-major state ordering: node i occupies rows i·n_states … (i+1)·n_states − 1.
    """
    A_cl: np.ndarray
    E_dist: np.ndarray
    E_noise: np.ndarray
    C_out: np.ndarray
    n_nodes: int
    n_states: int

    @property
    def inputs(self):
        return np.hstack([self.E_dist, self.E_noise])


def centering_matrix(N):
    """M_N = I_N − J_N/N."""
    return np.eye(N) - np.ones((N, N)) / N


def consensus_basis(N):
    """Orthonormal basis (N×(N−1)) of the complement of the all-ones vector."""
    return scipy.linalg.null_space(np.ones((1, N)))


def decoupled_matrix(s, K, lam):
    """A − λ B K H."""
    K = check_gain(s, K)
    return s.A - lam * s.B @ K @ s.H


def decoupled_noise_input(s, K, lam):
    """Input map of measurement noise in the mode at λ: −λ σ B K G."""
    K = check_gain(s, K)
    return -lam * s.sigma * s.B @ K @ s.G


def assemble_full(s, g, K):
    """
    Closed loop of N identical subsystems under relative feedback over `g`.

    A_cl = I_N⊗A − L⊗BKH, E_dist = I_N⊗E, E_noise = −σ(L⊗BKG), C_out = M_N⊗C.
    """
    K = check_gain(s, K)
    if not is_connected(g):
        logger.warning(f"Graph with {g.n_nodes} nodes is not connected; the network cannot reach consensus.")
    N = g.n_nodes
    L = laplacian(g)
    BK = s.B @ K
    return ClosedLoopNetwork(
        A_cl=np.kron(np.eye(N), s.A) - np.kron(L, BK @ s.H),
        E_dist=np.kron(np.eye(N), s.E),
        E_noise=-s.sigma * np.kron(L, BK @ s.G),
        C_out=np.kron(centering_matrix(N), s.C),
        n_nodes=N,
        n_states=s.n,
    )


def with_output(net, C_out, n_nodes, n_states):
    """Same dynamics with another output map and node partition (used for nested networks)."""
    return dataclasses.replace(net, C_out=C_out, n_nodes=n_nodes, n_states=n_states)


def project_consensus(net):
    """
    Restricts the closed loop to the consensus-orthogonal subspace.

    Every coupling term has the form S⊗X with S symmetric and S·1 = 0, so the
    subspace (1^⊥)⊗Rⁿ is invariant and the consensus component never reaches
    an output of the form (M⊗C).

    Returns:
        (A_p, B_p, C_p, V) with V = basis ⊗ I_n the embedding matrix.
    """
    V = np.kron(consensus_basis(net.n_nodes), np.eye(net.n_states))
    return V.T @ net.A_cl @ V, V.T @ net.inputs, net.C_out @ V, V


def augment_observer(s, K, F):
    """
    Subsystem of the observer-based relative output feedback u = −K x̂.

    The augmented state is (x, x̂). The observer gain enters through the input
    map B̂ = [0; I_n][−F, F], and the augmented feedback gain is I_{2q}
    (see observer_gain_identity). Only the true measurement carries noise,
    hence Ĝ = [I_q; 0]. At eigenvalue λ the closed loop, in (x, x − x̂)
    coordinates, is block triangular with diagonal blocks A − BK and A − λFH.
    """
    K = check_state_gain(s, K)
    F = check_observer_gain(s, F)
    n, q = s.n, s.q
    zeros_nn = np.zeros((n, n))
    zeros_nq = np.zeros((n, q))
    return SubsystemModel(
        A=np.block([[s.A, -s.B @ K], [zeros_nn, s.A - s.B @ K]]),
        B=np.block([[zeros_nq, zeros_nq], [-F, F]]),
        E=np.vstack([s.E, np.zeros_like(s.E)]),
        H=scipy.linalg.block_diag(s.H, s.H),
        C=np.hstack([s.C, np.zeros_like(s.C)]),
        sigma=s.sigma,
        G=np.vstack([np.eye(q), np.zeros((q, q))]) @ s.G,
        name=f"{s.name}+observer" if s.name else None,
    )


def observer_gain_identity(augmented):
    """Feedback gain that pairs with an augment_observer result."""
    return np.eye(augmented.q)


def separation_blocks(s, K, F, lam):
    """(A − BK, A − λFH): the two diagonal blocks of the observer closed loop at λ."""
    K = check_state_gain(s, K)
    F = check_observer_gain(s, F)
    return s.A - s.B @ K, s.A - lam * F @ s.H

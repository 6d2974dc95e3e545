# lapnet/performance/measures.py
import logging
from dataclasses import dataclass, field

import numpy as np

from .functions import phi, phi_observer, phi_u, psi
from ..graph.weighted_graph import graph_spectrum
from ..linalg.kernels import is_hurwitz, solve_lyapunov
from ..model.network import assemble_full, augment_observer, observer_gain_identity, project_consensus
from ..utils.errors import UnstableError
from ..utils.parallel import ordered_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralSum:
    """Σ over λ₂..λ_N of a per-eigenvalue function, with the individual terms."""
    total: float
    total_xi: float
    total_eta: float
    eigenvalues: tuple = ()
    contributions: tuple = field(default=())

    def to_dict(self, name="rho"):
        return {
            name: self.total,
            f"{name}_xi": self.total_xi,
            f"{name}_eta": self.total_eta,
            "per_eigenvalue": [{"index": i + 2, "lambda": lam, "value": c.phi, "xi": c.phi_xi, "eta": c.phi_eta}
                               for i, (lam, c) in enumerate(zip(self.eigenvalues, self.contributions))],
        }


def spectral_sum(func, g, threads=None):
    """
    Applies func(λ) -> PhiValue to λ₂..λ_N of g and sums in ascending order.

    Raises:
        UnstableError: naming the index and value of the first unstable mode.
    """
    eigenvalues = graph_spectrum(g).nonzero_index_eigenvalues

    def evaluate(item):
        index, lam = item
        try:
            return func(float(lam))
        except UnstableError as e:
            raise UnstableError(f"mode {index} (lambda_{index}={lam:.17g}) is unstable: {e}",
                                lam=float(lam), condition=e.condition) from e

    contributions = ordered_map(evaluate, list(enumerate(eigenvalues, start=2)), threads=threads)
    total = sum(c.phi for c in contributions)
    total_xi = sum(c.phi_xi for c in contributions)
    total_eta = sum(c.phi_eta for c in contributions)
    return SpectralSum(total=float(total), total_xi=float(total_xi), total_eta=float(total_eta),
                       eigenvalues=tuple(float(x) for x in eigenvalues), contributions=tuple(contributions))


def rho_spectral(s, g, K, F=None, threads=None):
    """ρ(L, K) = Σ φ(λᵢ). Passing F selects the observer-based variant φ(λ, K, F)."""
    if F is None:
        return spectral_sum(lambda lam: phi(s, K, lam), g, threads=threads)
    return spectral_sum(lambda lam: phi_observer(s, K, F, lam), g, threads=threads)


def mu_spectral(s, g, F, weight="output", threads=None):
    """μ(L, F) = Σ ψ(λᵢ)."""
    return spectral_sum(lambda lam: psi(s, F, lam, weight=weight), g, threads=threads)


def rho_u_spectral(s, g, K, threads=None):
    """ρ_u(L, K) = Σ φ_u(λᵢ)."""
    return spectral_sum(lambda lam: phi_u(s, K, lam), g, threads=threads)


def network_h2(net):
    """
    Steady-state output variance of a closed-loop network, computed on the
    consensus-orthogonal subspace with a single large Lyapunov solve.
    """
    A_p, B_p, C_p, _ = project_consensus(net)
    if A_p.size == 0:
        return 0.0
    if not is_hurwitz(A_p):
        raise UnstableError("network is unstable on the consensus-orthogonal subspace",
                            condition="projected A_cl")
    P = solve_lyapunov(A_p, B_p @ B_p.T)
    return float(np.trace(C_p @ P @ C_p.T))


def rho_oracle(s, g, K, F=None):
    """ρ from the assembled network, independent of the eigenvalue decomposition."""
    if F is None:
        return network_h2(assemble_full(s, g, K))
    augmented = augment_observer(s, K, F)
    return network_h2(assemble_full(augmented, g, observer_gain_identity(augmented)))


def mu_oracle(s, g, F, weight="output"):
    """
    μ from the assembled estimation-error network
    ė = (I⊗A − L⊗FH) e + (I⊗E) ξ − σ(L⊗FG) η.
    """
    W = s.C if weight == "output" else np.eye(s.n)
    error_model = s.replace(B=F, C=W, G=s.G)
    return network_h2(assemble_full(error_model, g, np.eye(s.q)))



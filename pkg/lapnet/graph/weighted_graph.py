# lapnet/graph/weighted_graph.py
import itertools
import logging
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np
import scipy.linalg

from ..utils.errors import ModelValidationError
from ..utils.schemas import ZERO_EIGENVALUE_TOL

logger = logging.getLogger(__name__)

GRAPH_KINDS = ("path", "cycle", "complete", "star")
MAX_ENUMERATION_NODES = 7


class WeightedGraph:
    """
    Undirected graph on nodes 0..n_nodes-1 with positive edge weights.

    Edges are stored as (i, j, w) with i < j, sorted. Disconnected graphs are
    allowed; callers that need connectivity check is_connected().
    """

    def __init__(self, n_nodes, edges=()):
        if int(n_nodes) != n_nodes or n_nodes < 1:
            raise ModelValidationError(f"n_nodes must be a positive integer, got {n_nodes}", field="n_nodes")
        self.n_nodes = int(n_nodes)
        normalized = {}
        for edge in edges:
            i, j, w = int(edge[0]), int(edge[1]), float(edge[2])
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise ModelValidationError(f"edge ({i}, {j}) has a node outside 0..{self.n_nodes - 1}",
                                           field="edges")
            if i == j:
                raise ModelValidationError(f"self-loop at node {i}", field="edges")
            if not (math.isfinite(w) and w > 0):
                raise ModelValidationError(f"edge ({i}, {j}) weight must be positive, got {w}", field="edges")
            key = (min(i, j), max(i, j))
            if key in normalized:
                raise ModelValidationError(f"duplicate edge {key}", field="edges")
            normalized[key] = w
        self.edges = tuple((i, j, w) for (i, j), w in sorted(normalized.items()))

    def __repr__(self):
        return f"WeightedGraph(n_nodes={self.n_nodes}, edges={len(self.edges)})"

    def __eq__(self, other):
        return (isinstance(other, WeightedGraph) and self.n_nodes == other.n_nodes
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.n_nodes, self.edges))

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def total_weight(self):
        return float(sum(w for _, _, w in self.edges))

    def degrees(self):
        """Unweighted degree of every node."""
        deg = [0] * self.n_nodes
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    @property
    def max_degree(self):
        return max(self.degrees())

    def is_unweighted(self):
        return all(w == 1.0 for _, _, w in self.edges)

    def scaled(self, factor):
        return WeightedGraph(self.n_nodes, [(i, j, w * factor) for i, j, w in self.edges])

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n_nodes))
        g.add_weighted_edges_from(self.edges)
        return g

    def laplacian(self):
        return laplacian(self)


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Ascending eigenvalues and the orthonormal eigenvector matrix U (columns)."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def nonzero_index_eigenvalues(self):
        """λ₂..λ_N, the modes that enter every performance measure."""
        return self.eigenvalues[1:]

    @property
    def algebraic_connectivity(self):
        return float(self.eigenvalues[1]) if len(self.eigenvalues) > 1 else 0.0


def laplacian(g):
    """Symmetric Laplacian with off-diagonal entries −w_ij and zero row sums."""
    L = np.zeros((g.n_nodes, g.n_nodes))
    for i, j, w in g.edges:
        L[i, j] -= w
        L[j, i] -= w
        L[i, i] += w
        L[j, j] += w
    return L


def spectrum(L, symmetry_tol=1e-12):
    """
    Eigendecomposition of a symmetric Laplacian.

    Eigenvalues with magnitude below ZERO_EIGENVALUE_TOL are set to exactly 0.

    Raises:
        ModelValidationError: L is not square or not symmetric.
    """
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if L.shape[0] != L.shape[1]:
        raise ModelValidationError(f"Laplacian must be square, got {L.shape}", field="L")
    scale = max(1.0, float(np.max(np.abs(L)))) if L.size else 1.0
    if not np.allclose(L, L.T, rtol=0.0, atol=symmetry_tol * scale):
        raise ModelValidationError("Laplacian is not symmetric", field="L")
    eigenvalues, eigenvectors = scipy.linalg.eigh(0.5 * (L + L.T))
    eigenvalues = np.where(np.abs(eigenvalues) < ZERO_EIGENVALUE_TOL, 0.0, eigenvalues)
    return LaplacianSpectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def graph_spectrum(g):
    return spectrum(laplacian(g))


def generate(kind, n, weight=1.0):
    """
    Standard topologies with a uniform edge weight.

    Node 0 is the hub of a star; paths and cycles visit nodes in index order.
    """
    if kind not in GRAPH_KINDS:
        raise ModelValidationError(f"unknown graph kind '{kind}', expected one of {GRAPH_KINDS}", field="kind")
    minimum = 3 if kind == "cycle" else 2
    if int(n) != n or n < minimum:
        raise ModelValidationError(f"{kind} graph needs at least {minimum} nodes, got {n}", field="n")
    n = int(n)
    if kind == "path":
        pairs = [(i, i + 1) for i in range(n - 1)]
    elif kind == "cycle":
        pairs = [(i, (i + 1) % n) for i in range(n)]
    elif kind == "complete":
        pairs = list(itertools.combinations(range(n), 2))
    else:
        pairs = [(0, i) for i in range(1, n)]
    return WeightedGraph(n, [(i, j, weight) for i, j in pairs])


def is_connected(g):
    if g.n_nodes == 1:
        return True
    return nx.is_connected(g.to_networkx())


def enumerate_connected_unweighted(n):
    """
    Yields every labeled connected simple graph on n nodes exactly once.

    Edge subsets are visited by increasing size; subsets with fewer than n−1
    edges cannot be connected and are skipped.
    """
    if int(n) != n or n < 2:
        raise ModelValidationError(f"enumeration needs n >= 2, got {n}", field="n")
    if n > MAX_ENUMERATION_NODES:
        raise ModelValidationError(
            f"enumeration is limited to n <= {MAX_ENUMERATION_NODES} nodes, got {n}", field="n")
    n = int(n)
    all_pairs = list(itertools.combinations(range(n), 2))
    for size in range(n - 1, len(all_pairs) + 1):
        for subset in itertools.combinations(all_pairs, size):
            g = nx.Graph()
            g.add_nodes_from(range(n))
            g.add_edges_from(subset)
            if nx.is_connected(g):
                yield WeightedGraph(n, [(i, j, 1.0) for i, j in subset])


def count_labeled_connected(n):
    return sum(1 for _ in enumerate_connected_unweighted(n))

# tests/test_graph/test_weighted_graph.py
import numpy as np
import pytest

from lapnet.graph.weighted_graph import (
    WeightedGraph, count_labeled_connected, enumerate_connected_unweighted, generate,
    graph_spectrum, is_connected, laplacian, spectrum
)
from lapnet.utils.errors import ModelValidationError


def test_edges_are_normalized():
    g = WeightedGraph(3, [(2, 0, 1.5), (1, 0, 1.0)])
    assert g.edges == ((0, 1, 1.0), (0, 2, 1.5))
    assert g.total_weight == 2.5
    assert g.degrees() == [2, 1, 1]
    assert g.max_degree == 2
    assert not g.is_unweighted()


@pytest.mark.parametrize("edges, message", [
    ([(0, 3, 1.0)], "outside"),
    ([(1, 1, 1.0)], "self-loop"),
    ([(0, 1, 0.0)], "positive"),
    ([(0, 1, 1.0), (1, 0, 2.0)], "duplicate"),
])
def test_invalid_edges(edges, message):
    with pytest.raises(ModelValidationError, match=message):
        WeightedGraph(3, edges)


def test_laplacian_rows_sum_to_zero():
    L = laplacian(WeightedGraph(4, [(0, 1, 2.0), (1, 2, 0.5), (2, 3, 1.0), (0, 3, 3.0)]))
    np.testing.assert_allclose(L.sum(axis=1), 0.0, atol=1e-15)
    np.testing.assert_allclose(L, L.T)
    assert L[0, 0] == 5.0


def test_path_spectrum():
    eigenvalues = graph_spectrum(generate("path", 5)).eigenvalues
    expected = [2 - 2 * np.cos(k * np.pi / 5) for k in range(5)]
    np.testing.assert_allclose(eigenvalues, expected, atol=1e-12)
    assert eigenvalues[0] == 0.0


@pytest.mark.parametrize("kind, expected", [
    ("star", [0.0, 1.0, 1.0, 4.0]),
    ("complete", [0.0, 4.0, 4.0, 4.0]),
    ("cycle", [0.0, 2.0, 2.0, 4.0]),
])
def test_standard_spectra(kind, expected):
    np.testing.assert_allclose(graph_spectrum(generate(kind, 4)).eigenvalues, expected, atol=1e-12)


def test_eigenvectors_are_orthonormal():
    spec = graph_spectrum(generate("star", 5, weight=2.0))
    U = spec.eigenvectors
    np.testing.assert_allclose(U.T @ U, np.eye(5), atol=1e-12)
    assert spec.algebraic_connectivity == pytest.approx(2.0)
    assert len(spec.nonzero_index_eigenvalues) == 4


def test_disconnected_graph_has_repeated_zero():
    g = WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)])
    assert not is_connected(g)
    assert list(graph_spectrum(g).eigenvalues[:2]) == [0.0, 0.0]


def test_spectrum_rejects_asymmetric():
    with pytest.raises(ModelValidationError, match="not symmetric"):
        spectrum(np.array([[1.0, -1.0], [0.0, 0.0]]))


def test_generate_validation():
    with pytest.raises(ModelValidationError, match="unknown graph kind"):
        generate("wheel", 5)
    with pytest.raises(ModelValidationError):
        generate("cycle", 2)


def test_scaled_graph():
    g = generate("path", 3).scaled(4.0)
    assert g.total_weight == 8.0
    assert is_connected(g)


@pytest.mark.parametrize("n, count", [(2, 1), (3, 4), (4, 38)])
def test_enumeration_counts(n, count):
    assert count_labeled_connected(n) == count


def test_enumeration_yields_unweighted_connected_graphs():
    graphs = list(enumerate_connected_unweighted(4))
    assert len(set(graphs)) == len(graphs)
    assert all(is_connected(g) and g.is_unweighted() for g in graphs)


def test_enumeration_limit():
    with pytest.raises(ModelValidationError, match="limited"):
        next(enumerate_connected_unweighted(8))


def random_weighted_graph(rng, n, density=0.5):
    edges = [(i, j, rng.uniform(0.1, 3.0)) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return WeightedGraph(n, edges)


@pytest.mark.parametrize("seed", range(10))
def test_eigenvalues_sum_to_twice_total_weight(seed):
    rng = np.random.default_rng(seed)
    g = random_weighted_graph(rng, int(rng.integers(2, 10)))
    eigenvalues = graph_spectrum(g).eigenvalues
    assert eigenvalues.sum() == pytest.approx(2 * g.total_weight, abs=1e-9)
    assert np.all(eigenvalues >= 0.0)


@pytest.mark.parametrize("seed", range(10))
def test_adding_an_edge_never_decreases_eigenvalues(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 10))
    sparse = random_weighted_graph(rng, n, density=0.3)
    present = {(i, j) for i, j, _ in sparse.edges}
    missing = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in present]
    extra = [missing[k] for k in rng.choice(len(missing), size=min(3, len(missing)), replace=False)]
    dense = WeightedGraph(n, list(sparse.edges) + [(i, j, rng.uniform(0.1, 3.0)) for i, j in extra])
    before = graph_spectrum(sparse).eigenvalues
    after = graph_spectrum(dense).eigenvalues
    assert np.all(after >= before - 1e-10)

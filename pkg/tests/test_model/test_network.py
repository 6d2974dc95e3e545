# tests/test_model/test_network.py
import numpy as np
import pytest

from lapnet.graph.weighted_graph import generate, graph_spectrum, laplacian
from lapnet.model.fixtures import build_fixture
from lapnet.model.network import (
    assemble_full, augment_observer, centering_matrix, consensus_basis, decoupled_matrix,
    decoupled_noise_input, observer_gain_identity, project_consensus, separation_blocks
)


def assert_same_eigenvalues(actual, expected, atol):
    """Greedy nearest matching; repeated eigenvalues make sorted comparison fragile."""
    remaining = list(actual)
    assert len(remaining) == len(expected)
    for value in expected:
        distances = [abs(value - r) for r in remaining]
        best = int(np.argmin(distances))
        assert distances[best] < atol, f"no eigenvalue near {value}"
        remaining.pop(best)


def test_centering_and_basis():
    M = centering_matrix(4)
    np.testing.assert_allclose(M @ np.ones(4), 0.0, atol=1e-15)
    V = consensus_basis(4)
    assert V.shape == (4, 3)
    np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(V @ V.T, M, atol=1e-12)


def test_assemble_full_kron_structure():
    s, gains = build_fixture("double_integrator", {"sigma": 0.5})
    g = generate("path", 3)
    net = assemble_full(s, g, gains.K)
    L = laplacian(g)
    BK = s.B @ gains.K
    np.testing.assert_allclose(net.A_cl, np.kron(np.eye(3), s.A) - np.kron(L, BK @ s.H))
    np.testing.assert_allclose(net.E_noise, -0.5 * np.kron(L, BK @ s.G))
    assert net.inputs.shape == (6, 3 + 6)
    assert net.C_out.shape == (3, 6)


def test_decoupled_modes_match_full_spectrum():
    s, gains = build_fixture("double_integrator")
    g = generate("star", 4)
    net = assemble_full(s, g, gains.K)
    modes = [np.linalg.eigvals(decoupled_matrix(s, gains.K, lam)) for lam in graph_spectrum(g).eigenvalues]
    assert_same_eigenvalues(np.linalg.eigvals(net.A_cl), np.concatenate(modes), atol=1e-6)


def test_decoupled_noise_input():
    s, gains = build_fixture("single_integrator", {"sigma": 2.0, "k": 3.0})
    np.testing.assert_allclose(decoupled_noise_input(s, gains.K, 0.5), [[-3.0]])


def test_projection_drops_consensus_mode():
    s, gains = build_fixture("single_integrator")
    net = assemble_full(s, generate("path", 5), gains.K)
    A_p, B_p, C_p, V = project_consensus(net)
    assert A_p.shape == (4, 4)
    assert B_p.shape == (4, 10)
    assert C_p.shape == (5, 4)
    expected = [-(2 - 2 * np.cos(k * np.pi / 5)) for k in range(1, 5)]
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(A_p).real), np.sort(expected), atol=1e-12)


def test_observer_augmentation_shapes():
    s, gains = build_fixture("double_integrator", {"output_feedback": 1})
    aug = augment_observer(s, gains.K, gains.F)
    assert (aug.n, aug.p, aug.q) == (4, 2, 2)
    assert aug.G.shape == (2, 1)
    np.testing.assert_array_equal(observer_gain_identity(aug), np.eye(2))


@pytest.mark.parametrize("kind", ["path", "complete"])
def test_observer_separation(kind):
    s, gains = build_fixture("double_integrator", {"output_feedback": 1, "f1": 2.0, "f2": 3.0})
    aug = augment_observer(s, gains.K, gains.F)
    g = generate(kind, 4)
    net = assemble_full(aug, g, observer_gain_identity(aug))
    expected = []
    for lam in graph_spectrum(g).eigenvalues:
        control, estimation = separation_blocks(s, gains.K, gains.F, lam)
        expected.extend(np.linalg.eigvals(control))
        expected.extend(np.linalg.eigvals(estimation))
    assert_same_eigenvalues(np.linalg.eigvals(net.A_cl), expected, atol=1e-5)

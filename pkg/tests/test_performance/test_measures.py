# tests/test_performance/test_measures.py
import numpy as np
import pytest

from lapnet.design.gains import design_gain, design_observer
from lapnet.graph.weighted_graph import WeightedGraph, generate, graph_spectrum
from lapnet.model.fixtures import build_fixture
from lapnet.model.subsystem import SubsystemModel
from lapnet.performance.measures import (
    mu_oracle, mu_spectral, rho_oracle, rho_spectral, rho_u_spectral, spectral_sum
)
from lapnet.performance.functions import PhiValue
from lapnet.utils.errors import UnstableError


@pytest.mark.parametrize("N", [2, 3, 5, 8])
def test_path_single_integrators(N):
    s, gains = build_fixture("single_integrator")
    assert rho_spectral(s, generate("path", N), gains.K).total == pytest.approx((N ** 2 - 1) / 12, rel=1e-9)


@pytest.mark.parametrize("kind, N, expected", [
    ("path", 5, 2.0),
    ("star", 4, 1.125),
    ("complete", 4, 0.375),
    ("path", 4, 1.25),
])
def test_reference_topologies(kind, N, expected):
    s, gains = build_fixture("single_integrator")
    assert rho_spectral(s, generate(kind, N), gains.K).total == pytest.approx(expected, rel=1e-9)


def test_double_integrators_on_triangle():
    s, gains = build_fixture("double_integrator")
    assert rho_spectral(s, generate("complete", 3), gains.K).total == pytest.approx(1.0 / 9.0, rel=1e-9)


def test_contributions_and_serialization():
    s, gains = build_fixture("single_integrator", {"sigma": 1.0})
    result = rho_spectral(s, generate("star", 4), gains.K, threads=2)
    assert result.eigenvalues == pytest.approx((1.0, 1.0, 4.0))
    assert result.total == pytest.approx(result.total_xi + result.total_eta, rel=1e-12)
    data = result.to_dict("rho")
    assert [row["index"] for row in data["per_eigenvalue"]] == [2, 3, 4]
    assert data["rho"] == result.total


def test_input_measure():
    s, gains = build_fixture("single_integrator")
    assert rho_u_spectral(s, generate("complete", 3), gains.K).total == pytest.approx(3.0, rel=1e-9)
    assert rho_u_spectral(s, generate("path", 5), gains.K).total == pytest.approx(4.0, rel=1e-9)
    s, gains = build_fixture("double_integrator")
    assert rho_u_spectral(s, generate("path", 2), gains.K).total == pytest.approx(1.5, rel=1e-9)


def test_unstable_mode_names_index():
    s, gains = build_fixture("triple_integrator")
    with pytest.raises(UnstableError, match=r"mode 2 \(lambda_2=") as excinfo:
        rho_spectral(s, generate("path", 4), gains.K)
    assert excinfo.value.lam == pytest.approx(2 - np.sqrt(2))


def test_spectral_sum_single_node():
    result = spectral_sum(lambda lam: PhiValue(1.0, 1.0, 0.0), WeightedGraph(1))
    assert result.total == 0.0


def random_connected_graph(rng, N):
    """Random spanning tree plus extra edges, weights in [0.5, 2]."""
    weights = {}
    for j in range(1, N):
        weights[(int(rng.integers(0, j)), j)] = rng.uniform(0.5, 2.0)
    for i in range(N):
        for j in range(i + 1, N):
            if (i, j) not in weights and rng.random() < 0.3:
                weights[(i, j)] = rng.uniform(0.5, 2.0)
    return WeightedGraph(N, [(i, j, w) for (i, j), w in weights.items()])


def random_instance(seed):
    """Seeded (subsystem, graph): N in [2, 12], n in [1, 4], p in [1, 2], sigma > 0."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    p = int(rng.integers(1, 3))
    q = int(rng.integers(1, n + 1))
    s = SubsystemModel(A=rng.standard_normal((n, n)), B=rng.standard_normal((n, p)),
                       E=rng.standard_normal((n, int(rng.integers(1, 3)))), H=np.eye(n),
                       C=rng.standard_normal((int(rng.integers(1, 3)), n)), sigma=rng.uniform(0.1, 1.0))
    H = rng.standard_normal((q, n))
    g = random_connected_graph(rng, int(rng.integers(2, 13)))
    return s, H, g


@pytest.mark.parametrize("seed", range(50))
def test_spectral_sum_matches_assembled_network(seed):
    s, _, g = random_instance(seed)
    lam2 = graph_spectrum(g).algebraic_connectivity
    K = design_gain(s, 0.9 * lam2).gain
    spectral = rho_spectral(s, g, K).total
    assert spectral == pytest.approx(rho_oracle(s, g, K), rel=1e-8)


@pytest.mark.parametrize("seed", range(50))
def test_observer_measure_matches_assembled_network(seed):
    base, H, g = random_instance(seed)
    s = base.replace(H=H)
    lam2 = graph_spectrum(g).algebraic_connectivity
    K = design_gain(s, 1.0).gain
    F = design_observer(s, 0.9 * lam2).gain
    spectral = rho_spectral(s, g, K, F=F).total
    assert spectral == pytest.approx(rho_oracle(s, g, K, F=F), rel=1e-7)


@pytest.mark.parametrize("seed", range(50))
def test_random_estimation_measure_matches_assembled_network(seed):
    base, H, g = random_instance(seed)
    s = base.replace(H=H)
    lam2 = graph_spectrum(g).algebraic_connectivity
    F = design_observer(s, 0.9 * lam2).gain
    spectral = mu_spectral(s, g, F).total
    assert spectral == pytest.approx(mu_oracle(s, g, F), rel=1e-8)


@pytest.mark.parametrize("weight", ["output", "state"])
def test_estimation_measure_matches_assembled_network(weight):
    s, gains = build_fixture("double_integrator", {"output_feedback": 1, "f1": 2.0, "f2": 3.0, "sigma": 0.5})
    g = generate("star", 5)
    spectral = mu_spectral(s, g, gains.F, weight=weight).total
    assert spectral == pytest.approx(mu_oracle(s, g, gains.F, weight=weight), rel=1e-8)


def test_measurement_noise_matches_assembled_network():
    s, gains = build_fixture("double_integrator", {"sigma": 0.7, "k1": 2.0})
    g = generate("cycle", 6, weight=1.5)
    assert rho_spectral(s, g, gains.K).total == pytest.approx(rho_oracle(s, g, gains.K), rel=1e-8)

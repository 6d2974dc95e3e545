# tests/test_composite/test_networks.py
import numpy as np
import pytest

from lapnet.composite.networks import (
    composite_threshold, flatten, phi_nn, rho_nn, rho_nn_flattened_oracle, rho_nn_general_oracle
)
from lapnet.graph.weighted_graph import WeightedGraph, generate
from lapnet.model.composite_model import CompositeSpec
from lapnet.model.fixtures import build_fixture
from lapnet.performance.functions import PerformanceFunction
from lapnet.performance.measures import rho_spectral
from lapnet.utils.errors import ModelValidationError, UnstableError


def spec(name, g1, k_inner, g2, k_outer, port=None, params=None):
    s, _ = build_fixture(name, params)
    return CompositeSpec(s, g1, k_inner, g2, k_outer, port=port)


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("lam", [0.5, 2.0])
@pytest.mark.parametrize("k1, k2", [(1.0, 1.0), (2.0, 0.5)])
def test_single_integrator_path_modules(m, lam, k1, k2):
    cs = spec("single_integrator", generate("path", m), [[k1]], generate("path", 2), [[k2]])
    expected = ((m * (m - 1) / 2) * k2 * lam + k1 * m) / (2 * k1 * k2 * lam)
    assert phi_nn(cs, lam).phi == pytest.approx(expected, rel=1e-9)


def test_single_integrator_path_reference_value():
    cs = spec("single_integrator", generate("path", 2), [[1.0]], generate("path", 2), [[1.0]])
    assert phi_nn(cs, 2.0).phi == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0])
def test_single_integrator_complete_modules(m, lam):
    k = 1.5
    cs = spec("single_integrator", generate("complete", m), [[k]], generate("path", 2), [[k]])
    expected = (2 * (m - 1) * lam + m ** 2) / (2 * m * k * lam)
    assert phi_nn(cs, lam).phi == pytest.approx(expected, rel=1e-9)


def test_single_integrator_complete_reference_value():
    cs = spec("single_integrator", generate("complete", 3), [[1.0]], generate("path", 2), [[1.0]])
    assert phi_nn(cs, 1.0).phi == pytest.approx(13.0 / 6.0, rel=1e-12)


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_double_integrator_complete_modules(m, lam):
    cs = spec("double_integrator", generate("complete", m), [[1.0, 1.0]], generate("path", 2), [[1.0, 1.0]])
    expected = ((m - 1) * (m + 2) * lam ** 2 + 2 * m ** 2 * (m - 1) * lam + m ** 4) / (2 * m ** 2 * lam ** 2)
    assert phi_nn(cs, lam).phi == pytest.approx(expected, rel=1e-9)
    if m == 2 and lam == 1.0:
        assert phi_nn(cs, lam).phi == pytest.approx(3.5, rel=1e-12)


def test_two_node_modules_path_equals_complete():
    path = spec("single_integrator", generate("path", 2), [[1.0]], generate("star", 4), [[1.0]])
    complete = spec("single_integrator", generate("complete", 2), [[1.0]], generate("star", 4), [[1.0]])
    assert rho_nn(path).total == pytest.approx(rho_nn(complete).total, rel=1e-12)


def test_single_module_has_no_higher_level_cost():
    cs = spec("double_integrator", generate("path", 3), [[1.0, 1.0]], WeightedGraph(1), [[1.0, 1.0]])
    result = rho_nn(cs)
    assert result.higher.total == 0.0
    assert result.total == pytest.approx(rho_spectral(cs.inner, cs.g1, cs.K1).total, rel=1e-12)


def test_single_node_modules_reduce_to_plain_network():
    s, gains = build_fixture("double_integrator")
    g2 = generate("cycle", 5)
    cs = CompositeSpec(s, WeightedGraph(1), gains.K, g2, 2 * gains.K)
    assert rho_nn(cs).total == pytest.approx(rho_spectral(s, g2, 2 * gains.K).total, rel=1e-9)


@pytest.mark.parametrize("name, g1, K1, g2, alpha, port", [
    ("single_integrator", generate("path", 3), [[1.0]], generate("complete", 3), 2.0, None),
    ("single_integrator", generate("star", 4), [[1.0]], generate("path", 4), 0.5, 0),
    ("double_integrator", generate("path", 3), [[1.0, 2.0]], generate("star", 3), 1.5, 1),
    ("harmonic_oscillator", generate("complete", 2), [[1.0, 1.0]], generate("path", 3), 3.0, None),
])
def test_flattened_oracle(name, g1, K1, g2, alpha, port):
    cs = spec(name, g1, K1, g2, (alpha * np.asarray(K1)).tolist(), port=port)
    assert rho_nn(cs).total == pytest.approx(rho_nn_flattened_oracle(cs), rel=1e-8)


def test_flatten_layout():
    cs = spec("single_integrator", generate("path", 3), [[1.0]], generate("path", 2), [[2.0]], port=1)
    g = flatten(cs)
    assert g.n_nodes == 6
    assert (1, 4, 2.0) in g.edges
    assert g.n_edges == 5


def test_general_oracle_with_unrelated_gains():
    cs = spec("double_integrator", generate("path", 3), [[1.0, 1.0]], generate("complete", 3), [[2.0, 0.5]])
    assert rho_nn(cs).total == pytest.approx(rho_nn_general_oracle(cs), rel=1e-8)


def test_general_oracle_matches_flattened_when_proportional():
    cs = spec("single_integrator", generate("star", 3), [[1.0]], generate("path", 3), [[3.0]], port=0)
    assert rho_nn_general_oracle(cs) == pytest.approx(rho_nn_flattened_oracle(cs), rel=1e-8)


def test_unstable_inner_network():
    cs = spec("triple_integrator", generate("path", 2, weight=0.25), [[1.0, 1.0, 1.0]],
              generate("path", 2), [[1.0, 1.0, 1.0]])
    with pytest.raises(UnstableError, match="inner network unstable"):
        rho_nn(cs)


def test_composite_thresholds():
    cs = spec("single_integrator", generate("path", 3), [[1.0]], generate("path", 3), [[1.0]])
    assert composite_threshold(cs).lambda_tilde == 0.0
    cs = spec("double_integrator", generate("complete", 3), [[1.0, 1.0]], generate("path", 3), [[2.0, 2.0]])
    assert composite_threshold(cs).lambda_tilde == 0.0
    cs = spec("triple_integrator", generate("path", 2, weight=3.0), [[1.0, 1.0, 1.0]],
              generate("path", 2), [[1.0, 1.0, 1.0]])
    result = composite_threshold(cs)
    assert result.bounded
    assert result.lambda_tilde > 0


def test_composite_threshold_needs_proportional_gains():
    cs = spec("double_integrator", generate("path", 3), [[1.0, 1.0]], generate("path", 3), [[2.0, 1.0]])
    with pytest.raises(ModelValidationError, match="alpha"):
        composite_threshold(cs)
    with pytest.raises(ModelValidationError):
        flatten(cs)


def test_composite_performance_handle():
    cs = spec("single_integrator", generate("complete", 3), [[1.0]], generate("path", 2), [[1.0]])
    pf = PerformanceFunction.for_composite(cs)
    assert pf.kind == "composite"
    assert pf(1.0) == pytest.approx(13.0 / 6.0, rel=1e-12)

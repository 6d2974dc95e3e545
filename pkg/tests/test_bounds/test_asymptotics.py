# tests/test_bounds/test_asymptotics.py
import numpy as np
import pytest

from lapnet.bounds.asymptotics import gamma_N, loglog_slope, path_cycle_ratio_experiment
from lapnet.model.fixtures import build_fixture
from lapnet.performance.functions import PerformanceFunction
from lapnet.utils.errors import ModelValidationError

HARMONIC = {"m": 1.0, "omega0": np.sqrt(2.0), "zeta": 1.0 / (2.0 * np.sqrt(2.0)), "k1": 1.0, "k2": 1.0}
HARMONIC_GAMMA_INF = 0.5 * (1.0 / np.sqrt(5.0) - 1.0 / np.sqrt(12.0))


def performance(name, params=None):
    s, gains = build_fixture(name, params)
    return PerformanceFunction("state_feedback", s, K=gains.K)


@pytest.mark.parametrize("N", [10, 100, 1000])
def test_single_integrator_closed_form(N):
    expected = 1.0 / (np.tan(np.pi / (2 * N)) * 4 * np.pi)
    assert gamma_N(performance("single_integrator"), N) == pytest.approx(expected, rel=1e-6)


def test_leaky_integrator_limit():
    pf = performance("single_integrator", {"a": 1.0, "k": 1.0})
    assert gamma_N(pf, 5000) == pytest.approx(1.0 / (2.0 * np.sqrt(5.0)), rel=1e-3)


def test_harmonic_oscillator_limit():
    assert HARMONIC_GAMMA_INF == pytest.approx(0.079266, abs=1e-6)
    assert gamma_N(performance("harmonic_oscillator", HARMONIC), 10000) == pytest.approx(HARMONIC_GAMMA_INF,
                                                                                          rel=1e-3)


def test_constant_function():
    assert gamma_N(lambda lam: 0.7, 40) == pytest.approx(0.7 * (1 - 1 / 40), rel=1e-10)


def test_gamma_validation():
    with pytest.raises(ModelValidationError, match="lambda_tilde = 0"):
        gamma_N(performance("triple_integrator"), 10)
    with pytest.raises(ModelValidationError):
        gamma_N(performance("single_integrator"), 1)


def test_path_ratio_for_single_integrators():
    s, gains = build_fixture("single_integrator")
    rows = path_cycle_ratio_experiment(s, gains.K, [50, 100, 200, 400])
    for row in rows:
        assert row.rho == pytest.approx((row.N ** 2 - 1) / 12, rel=1e-9)
        assert 0.55 <= row.ratio <= 0.65
    assert rows[-1].ratio == pytest.approx(6 / np.pi ** 2, rel=1e-2)


@pytest.mark.parametrize("kind", ["path", "cycle"])
def test_bounded_function_ratio_tends_to_one(kind):
    s, gains = build_fixture("harmonic_oscillator", HARMONIC)
    row = path_cycle_ratio_experiment(s, gains.K, [200], kind=kind)[0]
    assert row.ratio == pytest.approx(1.0, abs=0.05)


def test_path_and_cycle_agree_for_bounded_functions():
    s, gains = build_fixture("harmonic_oscillator", HARMONIC)
    path = path_cycle_ratio_experiment(s, gains.K, [200], kind="path")[0]
    cycle = path_cycle_ratio_experiment(s, gains.K, [200], kind="cycle")[0]
    assert abs(path.rho - cycle.rho) / path.rho < 0.02


def test_platoon_grows_like_fourth_power():
    s, gains = build_fixture("platoon", {"tau": 0.5})
    sizes = [20, 40, 80, 160]
    rows = path_cycle_ratio_experiment(s, gains.K, sizes)
    assert loglog_slope(sizes, [row.rho for row in rows]) == pytest.approx(4.0, abs=0.2)


def test_ratio_experiment_requires_zero_threshold():
    s, gains = build_fixture("triple_integrator")
    with pytest.raises(ModelValidationError):
        path_cycle_ratio_experiment(s, gains.K, [10])


def test_loglog_slope():
    xs = [1.0, 2.0, 4.0, 8.0]
    assert loglog_slope(xs, [3 * x ** 2 for x in xs]) == pytest.approx(2.0)


@pytest.mark.parametrize("N", [10, 100, 1000])
def test_cycle_integral_starts_at_two_over_n(N):
    expected = 1.0 / (np.tan(np.pi / N) * 4 * np.pi)
    assert gamma_N(performance("single_integrator"), N, start=2) == pytest.approx(expected, rel=1e-6)


def test_cycle_ratio_for_single_integrators():
    s, gains = build_fixture("single_integrator")
    rows = path_cycle_ratio_experiment(s, gains.K, [50, 100, 200, 400], kind="cycle")
    for row in rows:
        assert row.rho == pytest.approx((row.N ** 2 - 1) / 24, rel=1e-9)
    assert rows[-1].ratio == pytest.approx(6 / np.pi ** 2, rel=1e-2)

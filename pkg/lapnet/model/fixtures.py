# lapnet/model/fixtures.py
"""
Catalog of the worked-example subsystems.

Each builder takes keyword parameters (all real) and returns
(SubsystemModel, GainSet). `build_fixture` merges user parameters over the
defaults listed in FIXTURE_DEFAULTS and rejects unknown names.
"""
import logging

import numpy as np

from .subsystem import GainSet, SubsystemModel
from ..utils.errors import ModelValidationError

logger = logging.getLogger(__name__)

AIRCRAFT_A = [
    [-0.003, 0.039, 0.0, -0.322, 0.0, 0.0],
    [-0.065, -0.319, 7.74, 0.0, 0.0, 0.0],
    [0.02, -0.101, -0.429, 0.0, 0.0, 0.0],
    # pitch rate integrates into pitch angle
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 7.74, 0.0, 0.0],
]
AIRCRAFT_B = [
    [0.01, 1.0],
    [-0.18, -0.04],
    [-1.16, 0.598],
    [0.0, 0.0],
    [0.0, 0.0],
    [0.0, 0.0],
]
AIRCRAFT_E = [
    [0.003, -0.039],
    [0.065, 0.319],
    [-0.02, 0.101],
    [0.0, 0.0],
    [0.0, 0.0],
    [0.0, 0.0],
]
# Reference gains K and F for the threshold c = 0.25.
AIRCRAFT_K = [
    [1.1894, 0.7756, -2.0834, -7.5558, 0.3675, -0.2017],
    [2.8779, -0.0193, 0.1032, 0.1276, 0.7532, 0.0872],
]
AIRCRAFT_F = [
    [9.6772, -0.3789],
    [1.0285, 12.6584],
    [0.4233, -1.9982],
    [0.1418, 3.3839],
    [9.4718, -0.0616],
    [-0.0616, 9.0089],
]


def _column(*values):
    return np.array(values, dtype=float).reshape(-1, 1)


def single_integrator(a=0.0, k=1.0, sigma=0.0):
    """ẋ = −a x + u + ξ, ν = x."""
    model = SubsystemModel(A=[[-a]], B=[[1.0]], E=[[1.0]], H=[[1.0]], C=[[1.0]],
                           sigma=sigma, name="single_integrator")
    return model, GainSet([[k]])


def double_integrator(k1=1.0, k2=1.0, a1=0.0, a2=0.0, b0=0.0, b1=1.0,
                      f1=1.0, f2=1.0, output_feedback=0.0, sigma=0.0):
    """
    Second-order subsystem with A = [[0, 1], [−a₂, −a₁]], B = E = e₂, C = [b₁, b₀].

    With output_feedback = 1 only positions are measured (H = [1, 0]) and the
    observer gain F = [f₁, f₂]ᵀ is included; otherwise H = I₂.
    """
    A = [[0.0, 1.0], [-a2, -a1]]
    e2 = _column(0.0, 1.0)
    if output_feedback:
        model = SubsystemModel(A=A, B=e2, E=e2, H=[[1.0, 0.0]], C=[[b1, b0]], sigma=sigma,
                               name="double_integrator")
        return model, GainSet([[k1, k2]], _column(f1, f2))
    model = SubsystemModel(A=A, B=e2, E=e2, H=np.eye(2), C=[[b1, b0]], sigma=sigma, name="double_integrator")
    return model, GainSet([[k1, k2]])


def triple_integrator(k1=1.0, k2=1.0, k3=1.0, sigma=0.0):
    A = np.diag([1.0, 1.0], k=1)
    e3 = _column(0.0, 0.0, 1.0)
    model = SubsystemModel(A=A, B=e3, E=e3, H=np.eye(3), C=[[1.0, 0.0, 0.0]], sigma=sigma,
                           name="triple_integrator")
    return model, GainSet([[k1, k2, k3]])


def harmonic_oscillator(m=1.0, omega0=1.0, zeta=0.5, k1=1.0, k2=1.0, sigma=0.0):
    """Mass m on a spring with natural frequency ω₀ and damping ratio ζ; force input and disturbance."""
    A = [[0.0, 1.0], [-omega0 ** 2, -2.0 * zeta * omega0]]
    b = _column(0.0, 1.0 / m)
    model = SubsystemModel(A=A, B=b, E=b, H=np.eye(2), C=[[1.0, 0.0]], sigma=sigma,
                           name="harmonic_oscillator")
    return model, GainSet([[k1, k2]])


def platoon(tau=0.5, k1=1.0, k2=1.0, k3=1.0, sigma=0.0):
    """Vehicle with first-order engine lag τ: states (position, velocity, acceleration)."""
    if tau <= 0:
        raise ModelValidationError("tau must be positive", field="tau")
    A = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0 / tau]]
    b = _column(0.0, 0.0, 1.0 / tau)
    model = SubsystemModel(A=A, B=b, E=b, H=np.eye(3), C=[[1.0, 0.0, 0.0]], sigma=sigma, name="platoon")
    return model, GainSet([[k1, k2, k3]])


def nonmin_phase(zeta=1.0, alpha=1.0, beta=1.0, k1=1.0, k2=1.0, sigma=0.0):
    """Double integrator with output C = [−ζ, 1]: a zero at s = ζ in the right half plane."""
    model = SubsystemModel(A=[[0.0, 1.0], [0.0, 0.0]], B=_column(0.0, 1.0), E=_column(alpha, beta),
                           H=np.eye(2), C=[[-zeta, 1.0]], sigma=sigma, name="nonmin_phase")
    return model, GainSet([[k1, k2]])


def aircraft(alpha=1.0, beta=1.0, output_feedback=0.0, sigma=0.0):
    """
    Linearized longitudinal aircraft, states (u, v, θ̇, θ, x, z).

    The output weights the horizontal and vertical positions by α and β.
    With output_feedback = 1 only the two positions are measured.
    """
    C = np.zeros((2, 6))
    C[0, 4] = alpha
    C[1, 5] = beta
    if output_feedback:
        H = np.zeros((2, 6))
        H[0, 4] = 1.0
        H[1, 5] = 1.0
        model = SubsystemModel(A=AIRCRAFT_A, B=AIRCRAFT_B, E=AIRCRAFT_E, H=H, C=C, sigma=sigma, name="aircraft")
        return model, GainSet(AIRCRAFT_K, AIRCRAFT_F)
    model = SubsystemModel(A=AIRCRAFT_A, B=AIRCRAFT_B, E=AIRCRAFT_E, H=np.eye(6), C=C, sigma=sigma,
                           name="aircraft")
    return model, GainSet(AIRCRAFT_K)


FIXTURES = {
    "single_integrator": single_integrator,
    "double_integrator": double_integrator,
    "triple_integrator": triple_integrator,
    "harmonic_oscillator": harmonic_oscillator,
    "platoon": platoon,
    "nonmin_phase": nonmin_phase,
    "aircraft": aircraft,
}

FIXTURE_DEFAULTS = {
    "single_integrator": {"a": 0.0, "k": 1.0, "sigma": 0.0},
    "double_integrator": {"k1": 1.0, "k2": 1.0, "a1": 0.0, "a2": 0.0, "b0": 0.0, "b1": 1.0,
                          "f1": 1.0, "f2": 1.0, "output_feedback": 0.0, "sigma": 0.0},
    "triple_integrator": {"k1": 1.0, "k2": 1.0, "k3": 1.0, "sigma": 0.0},
    "harmonic_oscillator": {"m": 1.0, "omega0": 1.0, "zeta": 0.5, "k1": 1.0, "k2": 1.0, "sigma": 0.0},
    "platoon": {"tau": 0.5, "k1": 1.0, "k2": 1.0, "k3": 1.0, "sigma": 0.0},
    "nonmin_phase": {"zeta": 1.0, "alpha": 1.0, "beta": 1.0, "k1": 1.0, "k2": 1.0, "sigma": 0.0},
    "aircraft": {"alpha": 1.0, "beta": 1.0, "output_feedback": 0.0, "sigma": 0.0},
}


def fixture_names():
    return list(FIXTURES)


def parse_params(pairs):
    """['k=1', 'a=0.5'] -> {'k': 1.0, 'a': 0.5}."""
    params = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ModelValidationError(f"parameter '{pair}' is not of the form name=value", field="param")
        try:
            params[name.strip()] = float(value)
        except ValueError:
            raise ModelValidationError(f"parameter '{name}' value '{value}' is not a number", field=name)
    return params


def build_fixture(name, params=None):
    if name not in FIXTURES:
        raise ModelValidationError(f"unknown fixture '{name}', expected one of {fixture_names()}", field="fixture")
    params = dict(params or {})
    unknown = sorted(set(params) - set(FIXTURE_DEFAULTS[name]))
    if unknown:
        raise ModelValidationError(
            f"fixture '{name}' has no parameter(s) {unknown}; known: {sorted(FIXTURE_DEFAULTS[name])}",
            field=unknown[0])
    merged = {**FIXTURE_DEFAULTS[name], **params}
    logger.debug(f"Building fixture {name} with {merged}")
    return FIXTURES[name](**merged)

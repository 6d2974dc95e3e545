# lapnet/model/subsystem.py
import logging

import numpy as np

from ..linalg.kernels import as_mat
from ..utils.errors import ModelValidationError

logger = logging.getLogger(__name__)


class SubsystemModel:
    """
    Nodal realization shared by every subsystem of the network.

        ẋ = A x + B u + E ξ,   y = H x + σ G η,   ν = C x

    Shapes: A n×n, B n×p, E n×m₁, H q×n, C m₂×n, G q×r. G defaults to I_q,
    so measurement noise has one channel per measured quantity.
    """

    def __init__(self, A, B, E, H, C, sigma=0.0, G=None, name=None):
        self.A = as_mat(A, "A")
        self.B = as_mat(B, "B")
        self.E = as_mat(E, "E")
        self.H = as_mat(H, "H")
        self.C = as_mat(C, "C")
        self.sigma = float(sigma)
        self.G = np.eye(self.H.shape[0]) if G is None else as_mat(G, "G")
        self.name = name
        self._validate()

    def _validate(self):
        n = self.A.shape[0]
        checks = [
            ("A", self.A.shape[1] == n, f"A must be square, got {self.A.shape}"),
            ("B", self.B.shape[0] == n, f"B must have {n} rows, got {self.B.shape}"),
            ("E", self.E.shape[0] == n, f"E must have {n} rows, got {self.E.shape}"),
            ("H", self.H.shape[1] == n, f"H must have {n} columns, got {self.H.shape}"),
            ("C", self.C.shape[1] == n, f"C must have {n} columns, got {self.C.shape}"),
            ("G", self.G.shape[0] == self.H.shape[0],
             f"G must have {self.H.shape[0]} rows (one per measurement), got {self.G.shape}"),
            ("sigma", np.isfinite(self.sigma) and self.sigma >= 0, f"sigma must be >= 0, got {self.sigma}"),
        ]
        for field, ok, message in checks:
            if not ok:
                raise ModelValidationError(message, field=field)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def p(self):
        return self.B.shape[1]

    @property
    def q(self):
        return self.H.shape[0]

    def __repr__(self):
        label = f"'{self.name}', " if self.name else ""
        return f"SubsystemModel({label}n={self.n}, p={self.p}, q={self.q}, sigma={self.sigma})"

    def replace(self, **changes):
        """Copy with some of A, B, E, H, C, sigma, G, name replaced."""
        fields = {"A": self.A, "B": self.B, "E": self.E, "H": self.H, "C": self.C,
                  "sigma": self.sigma, "G": self.G, "name": self.name}
        if "H" in changes and "G" not in changes:
            fields["G"] = None
        fields.update(changes)
        return SubsystemModel(**fields)

    def state_feedback(self):
        """The same subsystem with full state measurement (H = I_n)."""
        return self.replace(H=np.eye(self.n))

    def to_dict(self):
        data = {"A": self.A.tolist(), "B": self.B.tolist(), "E": self.E.tolist(),
                "H": self.H.tolist(), "C": self.C.tolist(), "sigma": self.sigma}
        if not np.array_equal(self.G, np.eye(self.q)):
            data["G"] = self.G.tolist()
        if self.name:
            data["name"] = self.name
        return data


def check_gain(s, K, name="K"):
    """K as a p×q matrix matching `s`."""
    K = as_mat(K, name)
    if K.shape != (s.p, s.q):
        raise ModelValidationError(f"{name} must be {s.p}x{s.q} for this subsystem, got {K.shape}", field=name)
    return K


def check_state_gain(s, K, name="K"):
    """K in state-feedback form (p×n), as consumed by u = −K x̂."""
    K = as_mat(K, name)
    if K.shape != (s.p, s.n):
        raise ModelValidationError(
            f"{name} must be in state-feedback form {s.p}x{s.n}, got {K.shape}", field=name)
    return K


def check_observer_gain(s, F, name="F"):
    F = as_mat(F, name)
    if F.shape != (s.n, s.q):
        raise ModelValidationError(f"{name} must be {s.n}x{s.q} for this subsystem, got {F.shape}", field=name)
    return F


class GainSet:
    """Feedback gain K and optional observer gain F."""

    def __init__(self, K=None, F=None):
        self.K = None if K is None else as_mat(K, "K")
        self.F = None if F is None else as_mat(F, "F")

    def __repr__(self):
        k_shape = None if self.K is None else self.K.shape
        f_shape = None if self.F is None else self.F.shape
        return f"GainSet(K={k_shape}, F={f_shape})"

    def validate_against(self, s):
        """Raises ModelValidationError when the gains do not fit `s`."""
        if self.F is None:
            check_gain(s, self.K)
        else:
            if self.K is not None:
                check_state_gain(s, self.K)
            check_observer_gain(s, self.F)
        return self

    def to_dict(self):
        data = {} if self.K is None else {"K": self.K.tolist()}
        if self.F is not None:
            data["F"] = self.F.tolist()
        return data

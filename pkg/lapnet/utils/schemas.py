# lapnet/utils/schemas.py

"""
Defines the JSON schemas used for validation, together with the default
numerical tolerances that the solvers and the command line share.
"""

# Eigenvalues of a Laplacian with magnitude below this are treated as zero.
ZERO_EIGENVALUE_TOL = 1e-11

DEFAULT_HURWITZ_MARGIN = 1e-9
DEFAULT_THRESHOLD_SCAN_MAX = 1e6
DEFAULT_THRESHOLD_SCAN_MIN = 1e-6
DEFAULT_THRESHOLD_POINTS = 400
DEFAULT_THRESHOLD_TOL = 1e-9
DEFAULT_PBH_TOL = 1e-8
DEFAULT_QUAD_TOL = 1e-10
DEFAULT_FIT_TOL = 1e-6
DEFAULT_CONVEXITY_TOL = 1e-6
DEFAULT_FLOOR_EPS_SCHEDULE = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
DEFAULT_FLOOR_CONVERGENCE_TOL = 1e-4
DEFAULT_SIM_PATHS = 32
DEFAULT_SIM_DIVERGENCE_NORM = 1e8
DEFAULT_THREADS = 1

FLOAT_SIGNIFICANT_DIGITS = 17

_MATRIX = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "array",
        "items": {"type": "number"}
    }
}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "A": _MATRIX,
        "B": _MATRIX,
        "E": _MATRIX,
        "H": _MATRIX,
        "C": _MATRIX,
        "G": _MATRIX,
        "sigma": {"type": "number", "minimum": 0},
        "K": _MATRIX,
        "F": _MATRIX
    },
    "required": ["A", "B", "E", "H", "C"],
    "additionalProperties": False
}

GAIN_SCHEMA = {
    "type": "object",
    "properties": {
        "K": _MATRIX,
        "F": _MATRIX
    },
    "additionalProperties": True
}

SETTINGS_SCHEMA = {
    "type": "object",
    "properties": {
        "log_level": {
            "type": "string",
            "enum": ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        },
        "log_to_file": {"type": "boolean"},
        "log_file_path": {"type": "string"},
        "threads": {"type": "integer", "minimum": 1},
        "hurwitz_margin": {"type": "number", "minimum": 0},
        "threshold_scan_max": {"type": "number", "exclusiveMinimum": 0},
        "threshold_points": {"type": "integer", "minimum": 200},
        "threshold_tol": {"type": "number", "exclusiveMinimum": 0},
        "quad_tol": {"type": "number", "exclusiveMinimum": 0},
        "fit_tol": {"type": "number", "exclusiveMinimum": 0},
        "floor_eps_schedule": {
            "type": "array",
            "minItems": 2,
            "items": {"type": "number", "exclusiveMinimum": 0}
        },
        "sim_paths": {"type": "integer", "minimum": 1}
    },
    "additionalProperties": True
}

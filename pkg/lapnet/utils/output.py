# lapnet/utils/output.py
import contextlib
import csv
import hashlib
import json
import logging
import math
import os
import sys

import numpy as np

from .. import __version__
from .paths import ensure_output_dir_exists
from .schemas import FLOAT_SIGNIFICANT_DIGITS

logger = logging.getLogger(__name__)


def format_float(value):
    """17 significant digits, so CSV values round-trip exactly."""
    return format(float(value), f".{FLOAT_SIGNIFICANT_DIGITS}g")


def input_digest(source):
    """SHA-256 of a file's bytes, or of the literal string for shorthands and fixture specs."""
    hasher = hashlib.sha256()
    if isinstance(source, str) and os.path.isfile(source):
        with open(source, 'rb') as f:
            for chunk in iter(lambda: f.read(65536), b""):
                hasher.update(chunk)
    else:
        hasher.update(str(source).encode("utf-8"))
    return hasher.hexdigest()


def build_header(inputs, tolerances):
    """Reproducibility header: version, input hashes and the tolerances in effect."""
    return {
        "tool": "lapnet",
        "version": __version__,
        "inputs": {name: {"source": str(src), "sha256": input_digest(src)}
                   for name, src in sorted(inputs.items()) if src is not None},
        "tolerances": to_jsonable(tolerances),
    }


def to_jsonable(obj):
    """Converts numpy containers and scalars to plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return obj


@contextlib.contextmanager
def open_output(out):
    """Yields a text stream for `out`; '-' or None means standard output."""
    if out in (None, "-"):
        yield sys.stdout
        sys.stdout.flush()
        return
    ensure_output_dir_exists(out)
    with open(out, 'w', encoding='utf-8', newline='') as f:
        yield f
    logger.info(f"Wrote {out}")


def write_json(payload, out):
    with open_output(out) as stream:
        json.dump(to_jsonable(payload), stream, indent=2, allow_nan=False)
        stream.write("\n")


def write_csv(columns, rows, out):
    """Writes a header row and data rows; floats are formatted with format_float."""
    with open_output(out) as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])

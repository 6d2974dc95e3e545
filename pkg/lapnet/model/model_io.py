# lapnet/model/model_io.py
import json
import logging
import os

from .subsystem import GainSet, SubsystemModel
from ..utils.errors import ModelValidationError
from ..utils.json_validator import require_valid_json
from ..utils.schemas import MODEL_SCHEMA

logger = logging.getLogger(__name__)


def model_from_dict(data, description="Model"):
    """
    Builds (SubsystemModel, GainSet or None) from parsed JSON.

    Schema violations and dimension violations both raise
    ModelValidationError naming the first offending field.
    """
    require_valid_json(data, MODEL_SCHEMA, description)
    model = SubsystemModel(A=data["A"], B=data["B"], E=data["E"], H=data["H"], C=data["C"],
                           sigma=data.get("sigma", 0.0), G=data.get("G"), name=data.get("name"))
    gains = None
    if "K" in data or "F" in data:
        gains = GainSet(data.get("K"), data.get("F"))
        gains.validate_against(model)
    return model, gains


def load_model(file_path):
    logger.info(f"Loading model: {file_path}")
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"Model file not found: {file_path}")
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ModelValidationError(
            f"Model file is not valid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from e
    model, gains = model_from_dict(data, f"Model '{os.path.basename(file_path)}'")
    logger.info(f"Successfully loaded model {model!r}")
    return model, gains


def save_model(model, file_path, gains=None):
    logger.info(f"Saving model to: {file_path}")
    if not file_path:
        raise ValueError("Model file path not set for saving.")
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    data = model.to_dict()
    if gains is not None:
        data.update(gains.to_dict())
    with open(file_path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=4)
    return data

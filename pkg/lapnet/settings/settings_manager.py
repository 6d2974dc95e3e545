# lapnet/settings/settings_manager.py
import json
import os
import logging

from ..utils.paths import get_settings_file_path
from ..utils.schemas import (
    SETTINGS_SCHEMA, DEFAULT_THREADS, DEFAULT_HURWITZ_MARGIN,
    DEFAULT_THRESHOLD_SCAN_MAX, DEFAULT_THRESHOLD_POINTS, DEFAULT_THRESHOLD_TOL,
    DEFAULT_QUAD_TOL, DEFAULT_FIT_TOL, DEFAULT_FLOOR_EPS_SCHEDULE, DEFAULT_SIM_PATHS
)
from ..utils.json_validator import validate_json

logger = logging.getLogger(__name__)


class SettingsManager:
    """
    Tolerances, parallelism and logging options, stored as JSON and merged over
    the in-code defaults.

    Library code never writes the file implicitly; pass create_if_missing=True
    to seed a settings file with the defaults.
    """

    def __init__(self, settings_file=None, create_if_missing=False):
        self.settings_file = settings_file or get_settings_file_path()
        self.settings = self._load_defaults()
        self.load_settings(create_if_missing=create_if_missing)

    def _load_defaults(self):
        """Returns the default settings dictionary."""
        return {
            "log_level": "INFO",
            "log_to_file": False,
            "log_file_path": "lapnet.log",
            "threads": DEFAULT_THREADS,
            "hurwitz_margin": DEFAULT_HURWITZ_MARGIN,
            "threshold_scan_max": DEFAULT_THRESHOLD_SCAN_MAX,
            "threshold_points": DEFAULT_THRESHOLD_POINTS,
            "threshold_tol": DEFAULT_THRESHOLD_TOL,
            "quad_tol": DEFAULT_QUAD_TOL,
            "fit_tol": DEFAULT_FIT_TOL,
            "floor_eps_schedule": list(DEFAULT_FLOOR_EPS_SCHEDULE),
            "sim_paths": DEFAULT_SIM_PATHS,
        }

    def load_settings(self, create_if_missing=False):
        """Loads settings from the JSON file, merging with defaults."""
        self.settings = self._load_defaults()
        try:
            if os.path.exists(self.settings_file):
                with open(self.settings_file, 'r', encoding='utf-8') as f:
                    loaded_settings = json.load(f)

                is_valid, _ = validate_json(loaded_settings, SETTINGS_SCHEMA, "Settings file")
                if not is_valid:
                    logger.warning("Settings file format is not fully valid. Keeping defaults for invalid keys.")

                if isinstance(loaded_settings, dict):
                    for key, default in self._load_defaults().items():
                        if key not in loaded_settings:
                            continue
                        value = loaded_settings[key]
                        single = {key: value}
                        ok, _ = validate_json(single, SETTINGS_SCHEMA, f"Setting '{key}'")
                        if ok:
                            self.settings[key] = value
                        else:
                            logger.warning(f"Ignoring invalid value for '{key}'; using {default!r}.")
            elif create_if_missing:
                logger.info("No settings file found, creating with defaults.")
                self.save_settings()
            else:
                logger.debug(f"No settings file at {self.settings_file}; using defaults.")
        except (json.JSONDecodeError, IOError) as e:
            logger.error(f"Error loading settings from {self.settings_file}: {e}. Using defaults.", exc_info=True)
            self.settings = self._load_defaults()

    def save_settings(self):
        """Saves current settings to the JSON file."""
        try:
            directory = os.path.dirname(self.settings_file)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.settings_file, 'w', encoding='utf-8') as f:
                json.dump(self.settings, f, indent=4)
            logger.info("Settings saved.")
        except IOError as e:
            logger.error(f"Error saving settings to {self.settings_file}: {e}", exc_info=True)

    def get_setting(self, key, default=None):
        return self.settings.get(key, default)

    def set_setting(self, key, value):
        """Sets a known setting and saves immediately."""
        if key in self._load_defaults():
            self.settings[key] = value
            self.save_settings()
        else:
            logger.warning(f"Attempted to set unknown setting key '{key}'")

    def tolerances(self):
        """The numerical settings, as echoed into output headers."""
        return {key: value for key, value in self.settings.items()
                if key not in ("log_level", "log_to_file", "log_file_path")}

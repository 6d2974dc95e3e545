# lapnet/utils/paths.py
import os
import logging

logger = logging.getLogger(__name__)


def get_app_root_path():
    """Gets the root directory of the repository."""
    return os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))


def get_assets_path():
    return os.path.join(get_app_root_path(), "assets")


def get_fixtures_path():
    """Gets the path to the bundled model files inside 'assets'."""
    return os.path.join(get_assets_path(), "fixtures")


def get_fixture_file_path(filename: str) -> str:
    return os.path.join(get_fixtures_path(), filename)


def get_graphs_path():
    """Gets the path to the bundled edge lists inside 'assets'."""
    return os.path.join(get_assets_path(), "graphs")


def get_settings_path():
    return os.path.join(get_assets_path(), "settings")


def get_settings_file_path(filename: str = "settings.json") -> str:
    """
    Gets the full path to the settings file.

    LAPNET_SETTINGS, when set, points at an explicit file and wins over the
    bundled location.
    """
    override = os.environ.get("LAPNET_SETTINGS")
    if override:
        return override
    return os.path.join(get_settings_path(), filename)


def ensure_output_dir_exists(file_path: str):
    """Creates the parent directory of an output file if needed."""
    directory = os.path.dirname(os.path.abspath(file_path))
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        logger.error(f"Could not create output folder {directory}: {e}", exc_info=True)
        raise

# lapnet/utils/logger_config.py
import logging
import logging.config
import os

from .paths import get_app_root_path
from ..settings.settings_manager import SettingsManager

DEFAULT_LOG_LEVEL = "INFO"
LOG_FORMAT = '%(asctime)s - %(name)s - [%(levelname)s] - %(message)s'


def build_logging_config(level_name, log_to_file=False, log_file_path=None):
    """Returns the dictConfig mapping for console (stderr) and optional rotating file logging."""
    numeric_level = getattr(logging, str(level_name).upper(), logging.INFO)
    handlers = {
        'console': {
            'class': 'logging.StreamHandler',
            'level': numeric_level,
            'formatter': 'standard',
            # stdout is reserved for `--out -`
            'stream': 'ext://sys.stderr'
        }
    }
    if log_to_file:
        handlers['file'] = {
            'class': 'logging.handlers.RotatingFileHandler',
            'level': numeric_level,
            'formatter': 'standard',
            'filename': log_file_path,
            'maxBytes': 1024 * 1024 * 5,
            'backupCount': 2,
            'encoding': 'utf-8'
        }
    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'standard': {
                'format': LOG_FORMAT,
                'datefmt': '%Y-%m-%d %H:%M:%S'
            },
        },
        'handlers': handlers,
        'root': {
            'handlers': list(handlers),
            'level': numeric_level,
        },
    }


def setup_logging(level=None, settings_manager=None):
    """
    Sets up logging for the command line.

    The level comes from `level` when given (the CLI flag), otherwise from the
    settings file. File logging is enabled by the `log_to_file` setting.
    """
    settings_manager = settings_manager or SettingsManager()
    log_level_str = level or settings_manager.get_setting("log_level", DEFAULT_LOG_LEVEL)
    log_to_file = settings_manager.get_setting("log_to_file", False)
    log_file_path = settings_manager.get_setting("log_file_path", "lapnet.log")
    if not os.path.isabs(log_file_path):
        log_file_path = os.path.join(get_app_root_path(), log_file_path)

    if log_to_file:
        log_dir = os.path.dirname(log_file_path)
        if log_dir and not os.path.exists(log_dir):
            try:
                os.makedirs(log_dir, exist_ok=True)
            except OSError as e:
                logging.basicConfig(level=logging.ERROR, format=LOG_FORMAT)
                logging.error(f"Could not create log directory {log_dir}: {e}. File logging disabled.")
                log_to_file = False

    logging_config = build_logging_config(log_level_str, log_to_file, log_file_path)
    numeric_level = logging_config['root']['level']
    try:
        logging.config.dictConfig(logging_config)
        logging.getLogger(__name__).debug(
            f"Logging initialized. Level: {log_level_str}, File Logging: {log_to_file}"
            + (f", Log File: {log_file_path}" if log_to_file else ""))
    except Exception as e:
        logging.basicConfig(level=numeric_level)
        logging.exception(f"Error configuring logging with dictConfig: {e}. Fell back to basicConfig.")
    return numeric_level

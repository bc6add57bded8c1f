"""Logging utility

.. currentmodule:: pyfwgames.utils.app_logger
"""

import logging

_log_format = "%(asctime)s - [%(levelname)s] - %(name)s - (%(filename)s).%(funcName)s(%(lineno)d) - %(message)s"  # noqa: E501

_DEFAULTS = {"file": "pyfwgames.log", "file_level": "WARNING", "stream_level": "INFO"}


def _settings() -> dict:
    # deferred to call time
    try:
        from .config import config

        return {**_DEFAULTS, **config.logging}
    except (ImportError, ValueError):
        return dict(_DEFAULTS)


def get_file_handler(settings: dict) -> logging.FileHandler:
    """Log file handler.

    The file is only created once a record at or above the file level is emitted.

    Args:
        settings (dict): Logging section of the user config.

    Returns:
        FileHandler: Log FileHandler object.
    """
    file_handler = logging.FileHandler(settings["file"], delay=True)
    file_handler.setLevel(settings["file_level"])
    file_handler.setFormatter(logging.Formatter(_log_format))
    return file_handler


def get_stream_handler(settings: dict) -> logging.StreamHandler:
    """Log stream handler.

    Args:
        settings (dict): Logging section of the user config.

    Returns:
        StreamHandler: Log StreamHandler object
    """
    stream_handler = logging.StreamHandler()
    stream_handler.setLevel(settings["stream_level"])
    stream_handler.setFormatter(logging.Formatter(_log_format))
    return stream_handler


def get_logger(name: str) -> logging.Logger:
    """Get logger call.

    Args:
        name (str): Module name

    Returns:
        Logger: Return Logger object
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    settings = _settings()
    logger.setLevel(logging.DEBUG)
    logger.addHandler(get_file_handler(settings))
    logger.addHandler(get_stream_handler(settings))
    return logger

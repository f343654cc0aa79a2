"""Logging configuration for the library and CLI."""

import logging
import sys
from pathlib import Path

from cgnn.config import get_settings


def setup_logger(name: str) -> logging.Logger:
    """Setup logger with stderr and optional file handlers.

    stdout is left alone so that CLI reports can be piped as JSON.
    """
    settings = get_settings()
    logger = logging.getLogger(name)
    logger.setLevel(settings.log_level.upper())

    if logger.handlers:
        return logger

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)

    if settings.log_file:
        log_path = Path(settings.log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = True

    return logger

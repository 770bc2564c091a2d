# -*- coding: utf-8 -*-
"""
Logging setup with colored level names
"""

import logging
import sys
from typing import Optional

from termcolor import colored

from ..config.settings import AppSettings

_LEVEL_COLORS = {
    logging.DEBUG: "blue",
    logging.INFO: "green",
    logging.WARNING: "yellow",
    logging.ERROR: "red",
    logging.CRITICAL: "magenta",
}


class ColoredFormatter(logging.Formatter):
    """Formatter that colors the level name"""

    def __init__(self, use_color: bool = True):
        super().__init__(AppSettings.LOG_FORMAT, AppSettings.LOG_DATE_FORMAT)
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        if not self.use_color:
            return super().format(record)
        original = record.levelname
        record.levelname = colored(original, _LEVEL_COLORS.get(record.levelno, "white"))
        try:
            return super().format(record)
        finally:
            record.levelname = original


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """Install a single stderr handler on the kpboost logger"""
    logger = logging.getLogger("kpboost")
    logger.setLevel((level or AppSettings.LOG_LEVEL).upper())
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ColoredFormatter(use_color=sys.stderr.isatty()))
    logger.addHandler(handler)
    logger.propagate = False
    return logger

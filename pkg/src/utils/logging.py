"""Logging configuration: console verbosity, the per-directory ``nlqm.log`` and stage markers.

Every command logs into the directory it writes to. Commands that add to an
existing run directory (``analyze``) append, so a run's log keeps the
simulation and every later analysis in order.
"""

import logging
import os
import sys
from enum import Enum
from pathlib import Path
from typing import Optional, Union

LOG_FILE_NAME = "nlqm.log"

# Above CRITICAL: nothing reaches the console
_NONE_LEVEL = logging.CRITICAL + 10

_FILE_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"
_PLAIN_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_SHORT_NAMES = {
    logging.DEBUG: "DBG",
    logging.INFO: "INF",
    logging.WARNING: "WRN",
    logging.ERROR: "ERR",
    logging.CRITICAL: "CRT",
}


class LogLevel(str, Enum):
    """Console verbosity (short 3-char names, as printed in the log)."""

    DBG = "DBG"
    INF = "INF"
    WRN = "WRN"
    ERR = "ERR"
    NONE = "NONE"

    @property
    def python_level(self) -> int:
        return _LEVEL_MAP[self]


_LEVEL_MAP = {
    LogLevel.DBG: logging.DEBUG,
    LogLevel.INF: logging.INFO,
    LogLevel.WRN: logging.WARNING,
    LogLevel.ERR: logging.ERROR,
    LogLevel.NONE: _NONE_LEVEL,
}


def is_interactive() -> bool:
    """True when attached to a terminal (or an IDE terminal)."""
    return sys.stdout.isatty() or sys.stderr.isatty() or bool(os.environ.get("TERM_PROGRAM"))


def _console_handler(level: int) -> logging.Handler:
    if is_interactive():
        from .console import get_rich_logging_handler

        handler = get_rich_logging_handler()
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_PLAIN_FORMAT, datefmt=_DATE_FORMAT))
    handler.setLevel(level)
    return handler


def _file_handler(log_dir: Path, append: bool) -> logging.FileHandler:
    log_dir.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(
        log_dir / LOG_FILE_NAME, mode="a" if append else "w", encoding="utf-8"
    )
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(_FILE_FORMAT, datefmt=_DATE_FORMAT))
    return handler


def setup_logging(
    log_level: Union[LogLevel, str] = LogLevel.NONE,
    log_dir: Optional[Path] = None,
    append: bool = False,
) -> None:
    """Configure the root logger for one command.

    Args:
        log_level: Console verbosity. ``NONE`` keeps the console free for
            the command's own status output.
        log_dir: Directory receiving ``nlqm.log`` at DEBUG level, whatever
            the console level.
        append: Add to an existing ``nlqm.log`` instead of replacing it.

    Repeated calls replace the handlers of the previous call.
    """
    if isinstance(log_level, str):
        log_level = LogLevel(log_level.upper())
    for level, name in _SHORT_NAMES.items():
        logging.addLevelName(level, name)

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        if isinstance(handler, logging.FileHandler):
            handler.close()
    root.setLevel(logging.DEBUG)

    if log_level.python_level < _NONE_LEVEL:
        root.addHandler(_console_handler(log_level.python_level))
    if log_dir:
        root.addHandler(_file_handler(log_dir, append))

    # OptimizeWarning from the chi2 fit and numpy RuntimeWarnings land in the file
    logging.captureWarnings(True)
    logging.debug("Console log level: %s, log dir: %s, append: %s", log_level.value, log_dir, append)


def log_section(title: str) -> None:
    """Write a separator line into the log, e.g. at each pipeline stage."""
    logging.info("---- %s ----", title)

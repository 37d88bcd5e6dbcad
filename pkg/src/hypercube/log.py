# src/hypercube/log.py
from __future__ import annotations

import logging

from hypercube.config import settings

LOG_FORMAT = "[%(name)s] %(levelname)s %(message)s"


def configure_logging(level: str | int | None = None) -> None:
    """Install one stream handler on the package logger.

    Safe to call repeatedly; later calls only change the level.
    """
    logger = logging.getLogger("hypercube")
    logger.setLevel(level if level is not None else settings.log_level.upper())
    if not any(getattr(h, "_hypercube", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._hypercube = True  # type: ignore[attr-defined]
        logger.addHandler(handler)

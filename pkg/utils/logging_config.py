"""
Logging Configuration

Library modules call ``get_logger(__name__)``; the level comes from the
``CHWAVES_LOG_LEVEL`` environment variable (loaded from ``.env`` when present).
"""

import logging
import os

from dotenv import load_dotenv

load_dotenv()

_FORMAT = '%(asctime)s %(levelname)-7s %(name)s: %(message)s'
_configured = False


def _configure_root():
    global _configured
    if _configured:
        return
    level_name = os.getenv('CHWAVES_LOG_LEVEL', 'WARNING').upper()
    level = getattr(logging, level_name, logging.WARNING)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(_FORMAT))
    root = logging.getLogger('chwaves')
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
    _configured = True


def get_logger(name: str) -> logging.Logger:
    """
    Return a logger under the ``chwaves`` namespace.

    Args:
        name (str): Usually ``__name__`` of the calling module.

    Returns:
        logging.Logger: Child logger sharing the package handler and level.

    Example:
        >>> logger = get_logger(__name__)
        >>> logger.debug('bracket [%g, %g]', 0.1, 0.2)
    """
    _configure_root()
    return logging.getLogger(f'chwaves.{name}')

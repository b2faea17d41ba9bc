import sys

from loguru import logger

_LEVELS = {0: "WARNING", 1: "INFO"}


def configure_logging(verbosity: int = 0) -> None:
    logger.remove()
    level = _LEVELS.get(verbosity, "DEBUG")
    logger.add(sys.stderr, level=level,
               format="<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {name}:{function} - {message}")

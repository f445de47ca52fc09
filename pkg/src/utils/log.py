"""
Logging setup for rsld-lab
"""
import logging
import sys

ROOT_LOGGER = 'rsld'
LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
}


def get_logger(name: str = '') -> logging.Logger:
    """Child of the rsld logger, e.g. get_logger('engine') -> rsld.engine"""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}" if name else ROOT_LOGGER)


def setup_logging(level='WARNING', verbose: bool = False, quiet: bool = False) -> logging.Logger:
    """Install a single stderr handler on the rsld logger"""
    logger = logging.getLogger(ROOT_LOGGER)
    logger.handlers = list()
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.ERROR
    elif isinstance(level, str):
        level = LEVELS.get(level.upper(), logging.WARNING)
    logger.setLevel(level)
    logger.propagate = False

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    logger.addHandler(handler)
    return logger

"""
Utility functions for vigil
"""
import logging
import os
import re
import sys
from datetime import datetime

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(message)s'


def resolve_log_level(configured='INFO'):
    """
    Pick the diagnostic verbosity

    Args:
        configured: Level name from config.yaml

    Returns:
        Logging level as an integer; $VIGIL_LOG wins over the config value
    """
    name = os.environ.get('VIGIL_LOG') or configured or 'INFO'
    level = logging.getLevelName(str(name).upper())
    if not isinstance(level, int):
        return logging.INFO
    return level


def setup_logging(run_id=None):
    """
    Set up logging for an analysis run

    Diagnostics always go to stderr so reports written to stdout or disk
    stay machine-parseable.

    Args:
        run_id: Optional identifier for this run

    Returns:
        Logger instance
    """
    # Import here to avoid circular dependency
    from vigil.config import config

    if config.get('logging', 'enabled'):
        level = resolve_log_level(config.get('logging', 'level'))
    else:
        level = logging.ERROR

    handlers = [logging.StreamHandler(sys.stderr)]

    log_dir = config.get('logging', 'log_dir')
    if log_dir and config.get('logging', 'enabled'):
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        handlers.append(logging.FileHandler(os.path.join(log_dir, f'vigil_run_{timestamp}.log')))

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)

    logger = logging.getLogger('vigil')
    logger.debug("Starting new run: %s", run_id or 'unnamed')

    return logger


def slugify(text):
    """
    Turn a channel label into a file-name fragment

    Args:
        text: Arbitrary label, e.g. 'EEG Fpz-Cz'

    Returns:
        Lowercase slug, e.g. 'eeg-fpz-cz'
    """
    slug = re.sub(r'[^a-z0-9]+', '-', text.strip().lower()).strip('-')
    return slug or 'channel'


def format_seconds(value):
    """
    Compact text for a time offset in seconds

    Args:
        value: Seconds

    Returns:
        '40' for 40.0, '12.5' for 12.5
    """
    return f'{value:g}'

import logging
import sys
from datetime import datetime

import psutil

LOG_FORMAT = "%(name)s: %(message)s"


def setup_logging(level=logging.INFO, stream=None):
    """
    Install one stream handler on the root logger with the compact 'NAME: message' format.

    Calling it again replaces the handler, so scripts and tests can change the level freely.
    """

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_rectihull", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._rectihull = True
    root.addHandler(handler)
    root.setLevel(level)
    return root


def resource_usage():
    """ Returns the cpu usage (percent since the last call) and resident memory (MB) of this process """

    process = psutil.Process()
    return {'time': datetime.now().isoformat(timespec='seconds'),
            'cpu': process.cpu_percent(interval=None),
            'memory': round(process.memory_info().rss / (1024 * 1024), 2)}


def log_resource_usage(logger, tag):
    usage = resource_usage()
    logger.info(f"{tag} cpu={usage['cpu']}% memory={usage['memory']}MB")
    return usage


def cpu_count():
    return psutil.cpu_count(logical=True) or 1

import logging
import os

from joblib import Parallel, delayed

from util.config import c
from util.logs import cpu_count

logger = logging.getLogger("PARALLEL")


def thread_count(threads=None):
    """ Worker count: explicit argument, else the THREADS config key, 0 meaning every core; RECTIHULL_THREADS caps it """

    threads = int(c.THREADS if threads is None else threads)
    resolved = cpu_count() if threads <= 0 else threads
    env = os.getenv('RECTIHULL_THREADS')
    cap = int(env) if env not in (None, '') else 0
    return min(resolved, cap) if cap > 0 else resolved


def parallel_map(fn, items, threads=None):
    """ fn over items on a thread pool, results in the order of items """

    items = list(items)
    n_jobs = min(thread_count(threads), max(len(items), 1))
    logger.debug(f"{len(items)} tasks on {n_jobs} threads")
    if n_jobs == 1:
        return [fn(item) for item in items]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(fn)(item) for item in items)

# lapnet/utils/parallel.py
import logging
import os
from concurrent.futures import ThreadPoolExecutor

from .schemas import DEFAULT_THREADS

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "LAPNET_THREADS"


def thread_count(default=None):
    """Worker count: LAPNET_THREADS if set and valid, else `default`, else 1."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
        logger.warning(f"Ignoring invalid {THREADS_ENV_VAR}={raw!r}")
    return int(default) if default else DEFAULT_THREADS


def ordered_map(func, items, threads=None):
    """
    Applies func to every item and returns the results in input order.

    Runs serially for a single worker. Reductions over the returned list are
    therefore independent of the worker count.
    """
    items = list(items)
    workers = threads if threads is not None else thread_count()
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))

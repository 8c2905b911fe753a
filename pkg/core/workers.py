"""
Ordered worker pool.

run_ordered(func, items, workers=None)
    func over items on a thread pool, results in input order.

chunked(items, size)
    Fixed-size slices, so the work split never depends on the pool size.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

from django.conf import settings

logger = logging.getLogger(__name__)

CHUNK_SIZE = 256


def worker_count(requested=None):
    cap = max(1, int(settings.FKA_THREADS))
    return cap if requested is None else max(1, min(int(requested), cap))


def chunked(items, size=CHUNK_SIZE):
    return [items[i:i + size] for i in range(0, len(items), size)]


def run_ordered(func, items, workers=None):
    items = list(items)
    count = worker_count(workers)
    if count == 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug('running %d jobs on %d workers', len(items), count)
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(func, items))

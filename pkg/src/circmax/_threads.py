"""Internal parallelism cap, controlled by the CMX_THREADS env var."""

import os
from concurrent.futures import ThreadPoolExecutor


def max_workers() -> int:
    """Worker cap from CMX_THREADS; 0 or 1 (and unset) mean sequential."""
    raw = os.environ.get("CMX_THREADS", "")
    try:
        k = int(raw)
    except ValueError:
        return 1
    return max(1, k)


def map_ordered(fn, items):
    """Apply fn to items, results in input order regardless of scheduling."""
    items = list(items)
    k = max_workers()
    if k <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(k, len(items))) as pool:
        return list(pool.map(fn, items))

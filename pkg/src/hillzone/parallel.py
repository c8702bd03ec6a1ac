"""Worker-pool helpers; ``HILLZONE_THREADS`` caps the worker count."""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(requested=None):
    cap = os.environ.get("HILLZONE_THREADS")
    n = requested or os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def pmap(func, items, workers=None):
    """Ordered map over ``items``; runs in threads when more than one worker.

    The numeric kernels (LAPACK, the compiled integrator) release the GIL,
    so threads give real concurrency without pickling potentials.
    """
    items = list(items)
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def chunked(seq, parts):
    seq = list(seq)
    parts = max(1, min(parts, len(seq)))
    size, extra = divmod(len(seq), parts)
    out, start = [], 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        out.append(seq[start:stop])
        start = stop
    return out

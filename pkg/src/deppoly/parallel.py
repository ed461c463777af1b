"""Deterministic worker-pool helper.

Workers receive a read-only shared object through fork inheritance, so
large term-vector tables are never pickled per job. Results come back
in payload order whatever the worker count, which keeps every pipeline
artifact byte-identical for any --workers value.
"""

import multiprocessing as mp

_SHARED = None


def _invoke(item):
    func, payload = item
    return func(_SHARED, payload)


def run_ordered(func, payloads, shared=None, workers=1):
    """Apply func(shared, payload) to every payload, preserving order."""
    global _SHARED
    payloads = list(payloads)
    if workers <= 1 or len(payloads) < 2 or "fork" not in mp.get_all_start_methods():
        return [func(shared, p) for p in payloads]
    _SHARED = shared
    try:
        ctx = mp.get_context("fork")
        with ctx.Pool(processes=min(workers, len(payloads))) as pool:
            # chunksize 1: job costs are wildly uneven (polynomial sizes
            # vary by orders of magnitude), so fine dispatch wins
            return pool.map(_invoke, [(func, p) for p in payloads], chunksize=1)
    finally:
        _SHARED = None

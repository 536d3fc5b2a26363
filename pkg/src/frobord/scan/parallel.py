"""Ordered fan-out of independent chunk tasks."""

from __future__ import annotations

import multiprocessing as mp


def run_chunks(fn, tasks, workers: int = 1):
    """Yield ``fn(task)`` for each task, in task order, using up to ``workers`` processes."""
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield fn(t)
        return
    ctx = mp.get_context("fork")
    with ctx.Pool(min(workers, len(tasks))) as pool:
        yield from pool.imap(fn, tasks, chunksize=1)

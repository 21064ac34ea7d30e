"""Order-preserving process-pool map.

Results come back in task order, and every reduction downstream is an exact
rational sum, so the output never depends on the worker count.
"""
from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor

_STATE: dict = {}


def _init(payload):
    _STATE["payload"] = payload


def _call(args):
    fn, task = args
    return fn(_STATE["payload"], task)


def pmap(fn, payload, tasks, workers: int = 1, chunksize: int = 1) -> list:
    """[fn(payload, t) for t in tasks], optionally on ``workers`` processes.

    ``fn`` must be a module-level function; ``payload`` is shipped once per worker.
    """
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(payload, t) for t in tasks]
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx, initializer=_init, initargs=(payload,)) as ex:
        return list(ex.map(_call, [(fn, t) for t in tasks], chunksize=chunksize))

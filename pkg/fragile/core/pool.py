import concurrent.futures
import multiprocessing
import os

import cloudpickle


class Pool:
    """Keyed job pool. Results come back in job order, never completion order.

    Strategies follow the worker kinds of the runner: `blocking` runs jobs
    inline, `thread` uses a thread pool (numpy and LAPACK release the GIL),
    `process` ships cloudpickled callables to spawned processes.
    """

    def __init__(self, strategy="thread", workers=None):
        workers = int(workers or os.cpu_count() or 1)
        assert workers >= 1, workers
        self.strategy = strategy
        self.workers = workers
        if strategy == "blocking" or workers == 1:
            self._executor = None
        elif strategy == "thread":
            self._executor = concurrent.futures.ThreadPoolExecutor(workers)
        elif strategy == "process":
            self._executor = concurrent.futures.ProcessPoolExecutor(
                workers, mp_context=multiprocessing.get_context("spawn")
            )
        else:
            raise KeyError(f"Unknown pool strategy: {strategy}")

    def map(self, fn, jobs):
        """Runs `fn(*args)` for every `key: args` entry of `jobs`."""
        jobs = dict(jobs)
        if self._executor is None:
            return {key: fn(*args) for key, args in jobs.items()}
        if self.strategy == "process":
            payload = cloudpickle.dumps(fn)
            futures = {
                key: self._executor.submit(_call_pickled, payload, args)
                for key, args in jobs.items()
            }
        else:
            futures = {
                key: self._executor.submit(fn, *args) for key, args in jobs.items()
            }
        return {key: futures[key].result() for key in jobs}

    def close(self):
        if self._executor is not None:
            self._executor.shutdown(wait=True, cancel_futures=True)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _call_pickled(payload, args):
    return cloudpickle.loads(payload)(*args)

import collections
import contextlib
import time

import numpy as np


class Timer:
    """Accumulates wall-clock durations per named scope."""

    def __init__(self, columns=("total", "count", "avg", "max")):
        available = ("frac", "avg", "min", "max", "count", "total")
        assert all(x in available for x in columns), columns
        self._columns = columns
        self._durations = collections.defaultdict(list)
        self._start = time.time()

    def reset(self):
        for timings in self._durations.values():
            timings.clear()
        self._start = time.time()

    @contextlib.contextmanager
    def scope(self, name):
        start = time.time()
        try:
            yield
        finally:
            self._durations[name].append(time.time() - start)

    def stats(self, reset=False):
        metrics = {"duration": time.time() - self._start}
        for name, durs in self._durations.items():
            available = {"count": len(durs), "total": float(np.sum(durs))}
            available["frac"] = available["total"] / max(metrics["duration"], 1e-12)
            if durs:
                available["avg"] = float(np.mean(durs))
                available["min"] = float(np.min(durs))
                available["max"] = float(np.max(durs))
            for key, value in available.items():
                if key in self._columns:
                    metrics[f"{name}_{key}"] = value
        if reset:
            self.reset()
        return metrics

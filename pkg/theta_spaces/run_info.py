from __future__ import annotations

import datetime
import time
from typing import Any

import psutil

from . import __version__


class RunWatcher:
    """
    Measures the current process for the header of a report: wall time, CPU time and
    the largest resident set size seen by `sample`.
    """

    def __init__(self):
        self.process = psutil.Process()
        self.started = time.perf_counter()
        self.cpu_started = self._cpu_seconds()
        self.peak_rss = 0
        self.sample()

    def _cpu_seconds(self) -> float:
        times = self.process.cpu_times()
        return times.user + times.system

    def sample(self) -> None:
        self.peak_rss = max(self.peak_rss, self.process.memory_info().rss)

    def header(self) -> dict[str, Any]:
        """
        Returns:
            The report header. It is the only part of a report that differs between
            two runs of the same configuration.
        """
        self.sample()
        return {
            "tool": "theta-spaces",
            "version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "wall_seconds": time.perf_counter() - self.started,
            "cpu_seconds": self._cpu_seconds() - self.cpu_started,
            "peak_rss_bytes": self.peak_rss,
        }

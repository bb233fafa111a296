from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

# Sampling domain for nonnegative reals: log-uniform scale extremes plus a small
# integer-like grid, where corner cases live.
LOG_MIN = -6.0
LOG_MAX = 6.0
SMALL_GRID: tuple[float, ...] = tuple(i / 10 for i in range(51))


def default_t_grid(extra: Iterable[float] = ()) -> tuple[float, ...]:
    """The test grid {2^j : -10 <= j <= 10} plus user supplied values, sorted."""
    values = {2.0**j for j in range(-10, 11)}
    values.update(float(t) for t in extra if t > 0)
    return tuple(sorted(values))


def power_grid(lo: int, hi: int, scale: float = 1.0) -> tuple[float, ...]:
    """{scale * 2^j : lo <= j <= hi}, ascending."""
    return tuple(scale * 2.0**j for j in range(lo, hi + 1))


def rng(seed: int | None, batch: int | None = None) -> np.random.Generator:
    """Generator for `seed`, or for the given batch of `seed` when split."""
    if batch is None:
        return np.random.default_rng(seed)
    sequence = np.random.SeedSequence(seed)
    return np.random.default_rng(sequence.spawn(batch + 1)[batch])


def nonneg_reals(gen: np.random.Generator, count: int) -> np.ndarray:
    """Draw `count` values, half log-uniform over [1e-6, 1e6], half from the grid."""
    half = count // 2
    logs = gen.uniform(LOG_MIN, LOG_MAX, size=count - half)
    grid = gen.choice(np.asarray(SMALL_GRID), size=half)
    values = np.concatenate([10.0**logs, grid])
    gen.shuffle(values)
    return values


def positive_reals(gen: np.random.Generator, count: int) -> np.ndarray:
    values = nonneg_reals(gen, count)
    values[values == 0.0] = 1.0
    return values


def pick(gen: np.random.Generator, seq: Sequence[float]) -> float:
    return float(seq[int(gen.integers(len(seq)))])

from __future__ import annotations

from collections.abc import Callable
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt


class GridFunction:
    """Values of a function at the uniform nodes t_i = i/n of [0, 1].

    Instances are immutable; equality is exact equality of the node values.
    """

    def __init__(self, values: npt.ArrayLike):
        array = np.array(values, dtype=float)
        if array.ndim != 1 or array.size < 2:
            raise ValueError("A grid function needs at least two node values.")
        if not np.all(np.isfinite(array)):
            raise ValueError("Grid function values must be finite.")
        array.setflags(write=False)
        self._values = array

    @classmethod
    def zeros(cls, n: int) -> GridFunction:
        return cls(np.zeros(n + 1))

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], Any], n: int) -> GridFunction:
        return cls(np.broadcast_to(fn(np.linspace(0.0, 1.0, n + 1)), (n + 1,)))

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.size - 1

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)

    def sup_distance(self, other: GridFunction) -> float:
        if other.n != self.n:
            raise ValueError(
                "Grid functions live on different grids ({} vs {}).".format(self.n, other.n)
            )
        return float(np.max(np.abs(self._values - other.values)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridFunction):
            return NotImplemented
        return bool(np.array_equal(self._values, other.values))

    def __hash__(self) -> int:
        return hash(self._values.tobytes())

    def __repr__(self) -> str:
        return "GridFunction(n={}, max={:.6g})".format(
            self.n, float(np.max(np.abs(self._values)))
        )

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "values": self._values.tolist()}

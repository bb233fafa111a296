from __future__ import annotations

from typing import Any, Mapping

import numpy as np

from ..basic_space import BasicSpace
from ..carriers import Point, SampledCarrier
from ..errors import ConfigurationError
from ..fractional.grid import GridFunction


class SupGridSpace(BasicSpace):
    """Grid functions on n + 1 uniform nodes of [0, 1] with P = sup|φ - ϕ|/q."""

    Name = "sup_grid_space"
    Description = "Grid functions on [0, 1] with the sup distance divided by q."
    Action = "plus"
    Control = "ln"
    TMonotone = "nonincreasing"
    Parameters = {"n": 16}

    def check_parameters(self, params: Mapping[str, Any]):
        if params["n"] < 2:
            raise ConfigurationError("sup_grid_space needs n >= 2.", "/n")

    def distance(self, x: Point, y: Point, t: float) -> float:
        return x.sup_distance(y) / t

    def make_carrier(self):
        n = self.param("n")

        def sample(gen: np.random.Generator, count: int) -> list[GridFunction]:
            return [GridFunction(row) for row in gen.uniform(-1, 1, size=(count, n + 1))]

        return SampledCarrier(
            sample, lambda x: isinstance(x, GridFunction) and x.n == n, (-1.0, 1.0)
        )

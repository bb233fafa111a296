from __future__ import annotations

import math

from ..basic_space import BasicSpace
from ..carriers import Point, SampledCarrier, is_plane_point, plane_sampler


class PiecewiseSpace(BasicSpace):
    """P is 25 up to d, 50 up to 2d and 100d/t beyond, for the Euclidean d of the
    plane: neither increasing nor decreasing in t."""

    Name = "piecewise_space"
    Description = "The plane with the 25 / 50 / 100d/t distance under the half-sum action."
    Action = "half_sum"
    Control = "ln"
    Alpha = math.log(4)
    Parameters = {"box": 10.0}
    Probes = ((0, 0), (1, 0), (0, 2))

    def distance(self, x: Point, y: Point, t: float) -> float:
        d = math.dist(x, y)
        if d == 0:
            return 0.0
        if t <= d:
            return 25.0
        if t <= 2 * d:
            return 50.0
        return 100.0 * d / t

    def make_carrier(self):
        box = (-self.param("box"), self.param("box"))
        return SampledCarrier(plane_sampler(box), is_plane_point, box)

from __future__ import annotations

from ..basic_space import BasicSpace
from ..carriers import Point, SampledCarrier, is_plane_point, plane_sampler


def max_metric(a: Point, b: Point) -> float:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def sum_metric(a: Point, b: Point) -> float:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


class StepSpace(BasicSpace):
    Name = "step_space"
    Description = (
        "The plane with P stepping 100, 50, 25, 0 at the max metric, the sum metric "
        "and twice the sum metric."
    )
    Action = "plus"
    Control = "ln"
    Alpha = 0.0
    TMonotone = "nonincreasing"
    # wide box: the positivity premise must hold up to the top of the t-grid
    Parameters = {"box": 1000.0}
    Probes = ((1, 0), (0, 0.5), (0.25, 0.125))

    def distance(self, x: Point, y: Point, t: float) -> float:
        s1 = max_metric(x, y)
        s2 = sum_metric(x, y)
        if t <= s1:
            return 100.0
        if t <= s2:
            return 50.0
        if t <= 2 * s2:
            return 25.0
        return 0.0

    def make_carrier(self):
        box = (-self.param("box"), self.param("box"))
        return SampledCarrier(plane_sampler(box), is_plane_point, box)

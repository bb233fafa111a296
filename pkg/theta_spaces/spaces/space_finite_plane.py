from __future__ import annotations

import math

from ..basic_space import BasicSpace
from ..carriers import FiniteCarrier, Point

POINTS = ((3, 3), (7, 3), (3, 7), (7, 9))


def squared_euclidean(x: Point, y: Point) -> float:
    return float((x[0] - y[0]) ** 2 + (x[1] - y[1]) ** 2)


class FinitePlaneSpace(BasicSpace):
    Name = "finite_plane_space"
    Description = "Four points of the plane with P = |x - y|²/t (squared Euclidean, K = 2)."
    Action = "plus"
    Control = "ln"
    Alpha = math.log(2)
    BConstant = 2
    TMonotone = "nonincreasing"

    def b_metric(self, x: Point, y: Point) -> float:
        return squared_euclidean(x, y)

    def distance(self, x: Point, y: Point, t: float) -> float:
        return squared_euclidean(x, y) / t

    def make_carrier(self):
        return FiniteCarrier(POINTS)

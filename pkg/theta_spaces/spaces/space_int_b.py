from __future__ import annotations

import math
from numbers import Integral
from typing import Any, Mapping

from ..basic_space import BasicSpace
from ..carriers import CountableCarrier, Point
from ..errors import ConfigurationError


def _is_integer(x: Point) -> bool:
    return isinstance(x, Integral) and not isinstance(x, bool)


class IntBSpace(BasicSpace):
    Name = "int_b_space"
    Description = (
        "Integers with P = d/q, where d = |x - y| for equal parity and 5|x - y| + 9 "
        "otherwise (a b-metric with K = 5)."
    )
    Action = "plus"
    Control = "ln"
    Alpha = math.log(5)
    BConstant = 5
    TMonotone = "nonincreasing"
    Parameters = {"depth": 20}
    Probes = (0, 1, 2, 4)

    def check_parameters(self, params: Mapping[str, Any]):
        if params["depth"] < 1:
            raise ConfigurationError("int_b_space needs depth >= 1.", "/depth")

    def b_metric(self, x: Point, y: Point) -> float:
        gap = abs(int(x) - int(y))
        if (int(x) - int(y)) % 2 == 0:
            return float(gap)
        return 5.0 * gap + 9.0

    def distance(self, x: Point, y: Point, t: float) -> float:
        return self.b_metric(x, y) / t

    def make_carrier(self):
        return CountableCarrier(
            lambda depth: range(-depth, depth + 1), _is_integer, self.param("depth")
        )

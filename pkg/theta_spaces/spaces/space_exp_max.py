from __future__ import annotations

from typing import Any, Mapping

from ..basic_space import BasicSpace
from ..carriers import Point, SampledCarrier, is_real, real_sampler
from ..errors import ConfigurationError
from ..space import exp_or_inf


class ExpMaxSpace(BasicSpace):
    Name = "exp_max_space"
    Description = "Reals with P = k e^(|x - y|/t) off the diagonal, under the max action."
    Action = "max"
    Control = "neg_inv"
    TMonotone = "nonincreasing"
    Parameters = {"k": 1.0, "box": 5.0}

    def check_parameters(self, params: Mapping[str, Any]):
        if not params["k"] >= 1:
            raise ConfigurationError("exp_max_space needs k >= 1.", "/k")
        if not params["box"] > 0:
            raise ConfigurationError("exp_max_space needs a positive box.", "/box")

    def alpha(self) -> float:
        return 1.0 / self.param("k")

    def distance(self, x: Point, y: Point, t: float) -> float:
        if x == y:
            return 0.0
        return self.param("k") * exp_or_inf(abs(x - y) / t)

    def make_carrier(self):
        box = (-self.param("box"), self.param("box"))
        return SampledCarrier(real_sampler(box), is_real, box)

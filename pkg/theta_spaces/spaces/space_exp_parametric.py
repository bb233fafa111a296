from __future__ import annotations

from ..basic_space import BasicSpace
from ..carriers import Point, SampledCarrier, is_real, real_sampler
from ..space import exp_or_inf


class ExpParametricSpace(BasicSpace):
    Name = "exp_parametric_space"
    Description = (
        "Reals with P = e^t |x - y|: a parametric metric that is not a generalized "
        "parametric metric under +."
    )
    Action = "plus"
    Control = "ln"
    Certified = False
    Parameters = {"box": 5.0}

    def distance(self, x: Point, y: Point, t: float) -> float:
        gap = abs(x - y)
        return 0.0 if gap == 0 else exp_or_inf(t) * gap

    def make_carrier(self):
        box = (-self.param("box"), self.param("box"))
        return SampledCarrier(real_sampler(box), is_real, box)

from __future__ import annotations

import dataclasses
import enum
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .actions import BAction, ControlPair
from .carriers import Carrier, Point
from .errors import DomainError

DistanceFn = Callable[[Point, Point, float], float]


class TMonotone(enum.Enum):
    NONINCREASING = "nonincreasing"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class GThetaSpace:
    """A carrier with a parametric distance P(x, y, t) and its attached action and
    control pair.

    `b_metric` and `b_constant` are set when P = d/t for a b-metric d with constant K.
    `probes` are notable points the verifiers try exhaustively before sampling.
    """

    name: str
    carrier: Carrier
    distance_fn: DistanceFn
    action: BAction
    control: ControlPair
    symmetric: bool = True
    t_monotone: TMonotone = TMonotone.NONE
    complete: bool = True
    certified: bool = True
    description: str = ""
    params: Mapping[str, Any] = field(default_factory=dict[str, Any])
    b_metric: Callable[[Point, Point], float] | None = None
    b_constant: float | None = None
    probes: tuple[Point, ...] = ()

    def distance(self, x: Point, y: Point, t: float) -> float:
        """P(x, y, t).

        Raises:
            DomainError: If t is not a positive finite real or a point is outside the
                carrier.
        """
        if not (t > 0) or math.isinf(t):
            raise DomainError("Parameter t must be positive and finite, got {}.".format(t))
        for point in (x, y):
            if not self.carrier.contains(point):
                raise DomainError(
                    "Point {!r} is not in the carrier of {}.".format(point, self.name)
                )
        return float(self.distance_fn(x, y, t))

    def with_pair(
        self, action: BAction | None = None, control: ControlPair | None = None
    ) -> GThetaSpace:
        return dataclasses.replace(
            self,
            action=self.action if action is None else action,
            control=self.control if control is None else control,
        )

    @property
    def flags(self) -> dict[str, Any]:
        return {
            "symmetric": self.symmetric,
            "t_monotone": self.t_monotone.value,
            "complete": self.complete,
            "certified": self.certified,
        }

    def __repr__(self) -> str:
        params = ", ".join("{}={}".format(k, v) for k, v in self.params.items())
        return "GThetaSpace({}{})".format(self.name, "; " + params if params else "")


def exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf

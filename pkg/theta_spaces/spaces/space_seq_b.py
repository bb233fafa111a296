from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterator, Mapping

from ..basic_space import BasicSpace
from ..carriers import CountableCarrier, Point
from ..errors import ConfigurationError

VARIANTS = {
    # variant: (value off the special pairs, b-metric constant)
    "K83": (4.0, 8 / 3),
    "K4quarter": (0.25, 4.0),
}


def as_fraction(x: Point) -> Fraction | None:
    if isinstance(x, bool):
        return None
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        return None


def is_member(x: Point) -> bool:
    """x ∈ {0} ∪ {1/n : n >= 1}, at any depth."""
    value = as_fraction(x)
    return value is not None and (value == 0 or value.numerator == 1)


def _in_even_part(value: Fraction) -> bool:
    return value == 0 or value.denominator % 2 == 0


def enumerate_points(depth: int) -> Iterator[Fraction]:
    yield Fraction(0)
    yield Fraction(1)
    for n in range(2, depth + 1):
        yield Fraction(1, n)


class SeqBSpace(BasicSpace):
    """{0, 1} ∪ {1/n : n >= 2} with P = d/q for the b-metric

        d(x, y) = 1          for {x, y} = {0, 1},
                  |x - y|    for x, y in {0} ∪ {1/(2m)},
                  c          otherwise,

    where c is 4 for the K83 variant and 1/4 for K4quarter.
    """

    Name = "seq_b_space"
    Description = "Reciprocals with a b-metric that breaks open balls and closed balls."
    Action = "plus"
    Control = "ln"
    TMonotone = "nonincreasing"
    Parameters = {"variant": "K83", "depth": 10_000}
    Probes = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))

    def check_parameters(self, params: Mapping[str, Any]):
        if params["variant"] not in VARIANTS:
            raise ConfigurationError(
                "seq_b_space variant must be one of {}, got {}.".format(
                    ", ".join(VARIANTS), params["variant"]
                ),
                "/variant",
            )
        if params["depth"] < 2:
            raise ConfigurationError("seq_b_space needs depth >= 2.", "/depth")

    def b_constant(self) -> float:
        return VARIANTS[self.param("variant")][1]

    def alpha(self) -> float:
        return math.log(self.b_constant())

    def b_metric(self, x: Point, y: Point) -> float:
        a, b = as_fraction(x), as_fraction(y)
        assert a is not None and b is not None
        if a == b:
            return 0.0
        if {a, b} == {0, 1}:
            return 1.0
        if _in_even_part(a) and _in_even_part(b):
            return float(abs(a - b))
        return VARIANTS[self.param("variant")][0]

    def distance(self, x: Point, y: Point, t: float) -> float:
        return self.b_metric(x, y) / t

    def make_carrier(self):
        return CountableCarrier(enumerate_points, is_member, self.param("depth"))

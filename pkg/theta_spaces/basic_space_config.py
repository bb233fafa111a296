from __future__ import annotations

import json
import os
from collections.abc import Callable
from typing import Any

from .basic_space import BasicSpace
from .carriers import FiniteCarrier, Point, point_from_json
from .errors import ConfigurationError


class BasicConfigSpace(BasicSpace):
    """A finite space declared in a JSON file on top of a catalog space.

    The file names the catalog space in `Base` (with optional `BaseParameters`) and
    lists the carrier in `Points`. The distance formula comes from the base space;
    every other attribute (`Name`, `Action`, `Alpha`, ...) may override the base.
    """

    def __init__(self, path: str, resolve: Callable[[str], type[BasicSpace]]):
        # Set the _fromName to get more "correct" errors:
        self._fromName = os.path.basename(path)

        # Read the file:
        try:
            with open(path, encoding="utf-8") as fp:
                config: dict[str, Any] = json.load(fp)
        except (OSError, ValueError) as err:
            raise ConfigurationError(
                "Cannot read space definition {}: {}".format(self._fromName, err)
            ) from err

        # Just fill the class with values:
        for k, v in config.items():
            setattr(self, k, v)

        base_name = config.get("Base")
        if not isinstance(base_name, str):
            raise ConfigurationError(
                "Space definition {} is missing Base.".format(self._fromName), "/Base"
            )
        self._base = resolve(base_name)(**config.get("BaseParameters", {}))

        points = config.get("Points")
        if not isinstance(points, list) or not points:
            raise ConfigurationError(
                "Space definition {} needs a non-empty Points list.".format(
                    self._fromName
                ),
                "/Points",
            )
        self._points: tuple[Point, ...] = tuple(point_from_json(p) for p in points)  # type: ignore

        super().__init__()

    def action(self):
        if hasattr(self, "Action"):
            return self._mappings.action.get()
        return self._base.action()

    def control(self):
        if hasattr(self, "Control"):
            return self._mappings.control.get().with_alpha(self.alpha())
        return self._base.control().with_alpha(self.alpha())

    def alpha(self) -> float:
        if hasattr(self, "Alpha"):
            return self._mappings.alpha.get()
        return self._base.alpha()

    def t_monotone(self):
        if hasattr(self, "TMonotone"):
            return self._mappings.tMonotone.get()
        return self._base.t_monotone()

    def b_constant(self) -> float | None:
        if hasattr(self, "BConstant"):
            return self._mappings.bConstant.get()
        return self._base.b_constant()

    def b_metric(self, x: Point, y: Point) -> float:
        return self._base.b_metric(x, y)

    def distance(self, x: Point, y: Point, t: float) -> float:
        return self._base.distance(x, y, t)

    def make_carrier(self):
        return FiniteCarrier(self._points)

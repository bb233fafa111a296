from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from typing import Any, Generic, TypeVar

from . import actions
from .actions import BAction, ControlPair
from .carriers import Carrier, Point
from .errors import ConfigurationError
from .space import GThetaSpace, TMonotone

_T = TypeVar("_T")


class BasicSpaceMapping(Generic[_T]):
    # The space:
    _space: "BasicSpace"

    # Name of the attribute for exposure:
    _exposed_name: str

    # Name of the internal method:
    _internal_method_name: str

    # Callable returning a default value (if not required):
    _default: Callable[["BasicSpace"], _T]

    # Function to apply to the value:
    _apply_fn: Callable[[Any], _T] | None

    def __init__(
        self,
        space: BasicSpace,
        exposed_name: str,
        internal_method: str,
        default: Callable[[BasicSpace], _T] | None = None,
        apply_fn: Callable[[Any], _T] | None = None,
    ):
        self._space = space
        self._exposed_name = exposed_name
        self._internal_method_name = internal_method
        self._apply_fn = apply_fn

        if hasattr(space, self._exposed_name):
            value = getattr(space, self._exposed_name)

            if self._apply_fn is not None:
                try:
                    value = self._apply_fn(value)
                except Exception as err:
                    raise ConfigurationError(
                        "Catalog space from {} has an invalid {} property.".format(
                            space._fromName,  # pyright: ignore[reportPrivateUsage]
                            self._exposed_name,
                        )
                    ) from err
            self._default = lambda space: value  # type: ignore
        elif default is not None:
            self._default = default
        elif getattr(space.__class__, self._internal_method_name) is getattr(
            BasicSpace, self._internal_method_name
        ):
            raise ConfigurationError(
                "Catalog space from {} is missing {} property.".format(
                    space._fromName,  # pyright: ignore[reportPrivateUsage]
                    self._exposed_name,
                )
            )

    def get(self) -> _T:
        """Return the value of this mapping."""
        return self._default(self._space)


def _t_monotone(value: str | TMonotone) -> TMonotone:
    return value if isinstance(value, TMonotone) else TMonotone(value)


def _probes(value: Any) -> tuple[Point, ...]:
    return tuple(tuple(p) if isinstance(p, list) else p for p in value)  # type: ignore


class BasicSpaceMappings:
    name: BasicSpaceMapping[str]
    description: BasicSpaceMapping[str]
    action: BasicSpaceMapping[BAction]
    control: BasicSpaceMapping[ControlPair]
    alpha: BasicSpaceMapping[float]
    symmetric: BasicSpaceMapping[bool]
    tMonotone: BasicSpaceMapping[TMonotone]
    complete: BasicSpaceMapping[bool]
    certified: BasicSpaceMapping[bool]
    parameters: BasicSpaceMapping[dict[str, Any]]
    bConstant: BasicSpaceMapping[float | None]
    probes: BasicSpaceMapping[tuple[Point, ...]]

    def __init__(self, space: BasicSpace):
        self._space = space

        self.name = BasicSpaceMapping(space, "Name", "name")
        self.description = BasicSpaceMapping(
            space,
            "Description",
            "description",
            lambda s: "Catalog space {}.".format(s.name()),
        )
        self.action = BasicSpaceMapping(
            space, "Action", "action", apply_fn=actions.resolve_action
        )
        self.control = BasicSpaceMapping(
            space, "Control", "control", apply_fn=actions.resolve_control
        )
        self.alpha = BasicSpaceMapping(
            space, "Alpha", "alpha", default=lambda s: 0.0, apply_fn=float
        )
        self.symmetric = BasicSpaceMapping(
            space, "Symmetric", "symmetric", default=lambda s: True, apply_fn=bool
        )
        self.tMonotone = BasicSpaceMapping(
            space,
            "TMonotone",
            "t_monotone",
            default=lambda s: TMonotone.NONE,
            apply_fn=_t_monotone,
        )
        self.complete = BasicSpaceMapping(
            space, "Complete", "complete", default=lambda s: True, apply_fn=bool
        )
        self.certified = BasicSpaceMapping(
            space, "Certified", "certified", default=lambda s: True, apply_fn=bool
        )
        self.parameters = BasicSpaceMapping(
            space,
            "Parameters",
            "default_parameters",
            default=lambda s: {},
            apply_fn=dict,
        )
        self.bConstant = BasicSpaceMapping(
            space,
            "BConstant",
            "b_constant",
            default=lambda s: None,
            apply_fn=lambda v: None if v is None else float(v),
        )
        self.probes = BasicSpaceMapping(
            space, "Probes", "probes", default=lambda s: (), apply_fn=_probes
        )


class BasicSpace:
    """Base class of the catalog spaces.

    Subclasses declare their metadata as class attributes (`Name`, `Action`, `Control`,
    `Alpha`, ...) and implement `distance` and `make_carrier`. Any attribute can be
    replaced by overriding the matching method, e.g. `alpha` when it depends on the
    parameters.
    """

    # File containing the catalog class:
    _fromName: str

    # Resolved parameters of this instance:
    _params: dict[str, Any]

    def __init__(self, **params: Any):
        if not hasattr(self, "_fromName"):
            self._fromName = self.__class__.__name__

        self._mappings: BasicSpaceMappings = BasicSpaceMappings(self)
        self._params = self._resolve_parameters(params)
        self.check_parameters(self._params)

    def _resolve_parameters(self, given: Mapping[str, Any]) -> dict[str, Any]:
        defaults = self.default_parameters()
        unknown = sorted(set(given) - set(defaults))
        if unknown:
            raise ConfigurationError(
                "Space {} got unknown parameter(s) {}, expected {}.".format(
                    self.name(), ", ".join(unknown), ", ".join(defaults) or "none"
                ),
                "/" + unknown[0],
            )
        params = dict(defaults)
        for key, value in given.items():
            default = defaults[key]
            try:
                if isinstance(default, bool) or default is None:
                    params[key] = value
                elif isinstance(default, int) and not isinstance(value, str):
                    if float(value) != int(value):
                        raise ValueError("not an integer")
                    params[key] = int(value)
                elif isinstance(default, (int, float)):
                    params[key] = type(default)(value)
                else:
                    params[key] = str(value)
            except (TypeError, ValueError) as err:
                raise ConfigurationError(
                    "Space {} has an invalid {} parameter: {!r}.".format(
                        self.name(), key, value
                    ),
                    "/" + key,
                ) from err
        return params

    # Specific to BasicSpace:
    def check_parameters(self, params: Mapping[str, Any]) -> None:
        """Raise a ConfigurationError for invalid parameter values."""

    def param(self, key: str) -> Any:
        return self._params[key]

    @property
    def params(self) -> dict[str, Any]:
        return dict(self._params)

    # Catalog interface:

    def name(self) -> str:
        return self._mappings.name.get()

    def description(self) -> str:
        return self._mappings.description.get()

    def action(self) -> BAction:
        return self._mappings.action.get()

    def alpha(self) -> float:
        return self._mappings.alpha.get()

    def control(self) -> ControlPair:
        return self._mappings.control.get().with_alpha(self.alpha())

    def symmetric(self) -> bool:
        return self._mappings.symmetric.get()

    def t_monotone(self) -> TMonotone:
        return self._mappings.tMonotone.get()

    def complete(self) -> bool:
        return self._mappings.complete.get()

    def certified(self) -> bool:
        return self._mappings.certified.get()

    def default_parameters(self) -> dict[str, Any]:
        return self._mappings.parameters.get()

    def b_constant(self) -> float | None:
        return self._mappings.bConstant.get()

    def probes(self) -> tuple[Point, ...]:
        return self._mappings.probes.get()

    def b_metric(self, x: Point, y: Point) -> float:
        """Underlying b-metric d when the distance is d/t; NaN otherwise."""
        return math.nan

    def distance(self, x: Point, y: Point, t: float) -> float:
        raise NotImplementedError

    def make_carrier(self) -> Carrier:
        raise NotImplementedError

    def space(self) -> GThetaSpace:
        """Build the immutable space value for the current parameters."""
        b_constant = self.b_constant()
        return GThetaSpace(
            name=self.name(),
            carrier=self.make_carrier(),
            distance_fn=self.distance,
            action=self.action(),
            control=self.control(),
            symmetric=self.symmetric(),
            t_monotone=self.t_monotone(),
            complete=self.complete(),
            certified=self.certified(),
            description=self.description(),
            params=self.params,
            b_metric=self.b_metric if b_constant is not None else None,
            b_constant=b_constant,
            probes=self.probes(),
        )

    def __repr__(self) -> str:
        return "<{} {}>".format(self.name(), self._fromName)

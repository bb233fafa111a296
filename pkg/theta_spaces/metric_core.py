from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np

from . import create_spaces, sampling
from .actions import resolve_action, resolve_control
from .basic_space import BasicSpace
from .basic_space_config import BasicConfigSpace
from .carriers import FiniteCarrier, Point
from .errors import ConfigurationError, DomainError, UnsupportedError
from .report import AxiomReport, Verdict, Witness, violates
from .space import GThetaSpace, TMonotone

logger = logging.getLogger(__name__)

# Largest point set verify_b_metric enumerates by default (triples are cubic).
B_METRIC_POINTS = 64


@functools.cache
def catalog() -> dict[str, BasicSpace]:
    return {plugin.name(): plugin for plugin in create_spaces()}


def list_catalog() -> list[dict[str, Any]]:
    """Name, description, attached pair, parameters and flags of every catalog space."""
    rows: list[dict[str, Any]] = []
    for name, plugin in sorted(catalog().items()):
        space = plugin.space()
        rows.append(
            {
                "name": name,
                "description": space.description,
                "action": space.action.name,
                "control": {"name": space.control.name, "alpha": space.control.alpha},
                "parameters": dict(plugin.default_parameters()),
                "b_constant": space.b_constant,
                **space.flags,
            }
        )
    return rows


def make_catalog_space(name: str, params: Mapping[str, Any] | None = None) -> GThetaSpace:
    """Build a catalog space with its attached action and control pair.

    Raises:
        ConfigurationError: For an unknown name or invalid parameters.
    """
    try:
        plugin = catalog()[name]
    except KeyError as err:
        raise ConfigurationError(
            "Unknown space {}, expected one of {}.".format(
                name, ", ".join(sorted(catalog()))
            ),
            "/space",
        ) from err
    if not params:
        return plugin.space()
    if isinstance(plugin, BasicConfigSpace):
        raise ConfigurationError(
            "Space {} is defined by a file and takes no parameters.".format(name), "/space"
        )
    return type(plugin)(**params).space()


def space_from_config(block: Mapping[str, Any]) -> GThetaSpace:
    """Build a space from a block such as {"space": "seq_b_space", "depth": 100}.

    Optional "action" and "control" entries replace the attached pair.
    """
    params = dict(block)
    name = params.pop("space", None)
    if not isinstance(name, str):
        raise ConfigurationError("A space block needs a space name.", "/space")
    action = params.pop("action", None)
    control = params.pop("control", None)
    space = make_catalog_space(name, params)
    if action is not None or control is not None:
        space = space.with_pair(
            None if action is None else resolve_action(action),
            None if control is None else resolve_control(control),
        )
    return space


def eval_metric(space: GThetaSpace, x: Point, y: Point, t: float) -> float:
    """P(x, y, t) of the space.

    Raises:
        DomainError: If t <= 0 or a point lies outside the carrier.
    """
    return space.distance(x, y, t)


def _require_finite(space: GThetaSpace) -> tuple[Point, ...]:
    if not isinstance(space.carrier, FiniteCarrier):
        raise UnsupportedError(
            "{} has no finite carrier; restrict it to finitely many points first.".format(
                space.name
            )
        )
    return space.carrier.points()


def induce_parametric(
    space: GThetaSpace, x: Point, y: Point, t: float, split_count: int = 99
) -> float:
    """The induced distance

        min( P(x, y, t),  min over z and t1 + t2 = t of  P(x, z, t1) θ P(z, y, t2) )

    with t1 ∈ {t i / (split_count + 1) : 1 <= i <= split_count} and θ the attached
    action.

    Raises:
        UnsupportedError: If the carrier is not finite.
    """
    if split_count < 1:
        raise DomainError("split_count must be at least 1.")
    points = _require_finite(space)
    best = eval_metric(space, x, y, t)
    if best == 0:
        return 0.0
    for i in range(1, split_count + 1):
        t1 = t * (i / (split_count + 1))
        t2 = t - t1
        for z in points:
            value = space.action(eval_metric(space, x, z, t1), eval_metric(space, z, y, t2))
            if value < best:
                best = value
    return best


def restrict(space: GThetaSpace, points: Iterable[Point]) -> GThetaSpace:
    """The same distance, action and control on a finite subset of the carrier."""
    subset = tuple(dict.fromkeys(points))
    if not subset:
        raise DomainError("Cannot restrict {} to an empty set.".format(space.name))
    for point in subset:
        if not space.carrier.contains(point):
            raise DomainError(
                "Point {!r} is not in the carrier of {}.".format(point, space.name)
            )
    return dataclasses.replace(
        space,
        name="{}|{}".format(space.name, len(subset)),
        carrier=FiniteCarrier(subset),
        probes=tuple(p for p in space.probes if p in subset),
    )


def induced_space(space: GThetaSpace, split_count: int = 99) -> GThetaSpace:
    """A space whose distance is `induce_parametric` of `space`."""
    _require_finite(space)

    def distance(x: Point, y: Point, t: float) -> float:
        return induce_parametric(space, x, y, t, split_count)

    return dataclasses.replace(
        space,
        name="induced({})".format(space.name),
        distance_fn=distance,
        t_monotone=TMonotone.NONE,
        certified=False,
        b_metric=None,
        b_constant=None,
        params={**space.params, "split_count": split_count},
    )


def verify_b_metric(
    space: GThetaSpace,
    k: float | None = None,
    points: Iterable[Point] | None = None,
) -> AxiomReport:
    """Exhaustively check that the underlying d is a b-metric with constant K:
    d(x, y) = 0 iff x = y, symmetry, and d(x, y) <= K (d(x, z) + d(z, y)).

    Points default to the enumerable carrier, capped at `B_METRIC_POINTS`.
    """
    d = space.b_metric
    constant = space.b_constant if k is None else k
    if d is None or constant is None:
        raise UnsupportedError("{} is not built from a b-metric.".format(space.name))
    if points is None:
        points = space.carrier.points()[:B_METRIC_POINTS]
    pts = tuple(points)

    trials = 0
    witness: Witness | None = None
    for x, y in itertools.product(pts, repeat=2):
        trials += 1
        dxy = d(x, y)
        if (dxy == 0) != (x == y):
            witness = Witness((x, y), {}, dxy, 0.0, "d(x, y) == 0 iff x == y")
        elif violates(abs(dxy - d(y, x)), 0.0):
            witness = Witness((x, y), {}, dxy, d(y, x), "lhs == rhs")
        if witness is not None:
            break
    if witness is None:
        for x, z, y in itertools.product(pts, repeat=3):
            trials += 1
            lhs = d(x, y)
            rhs = constant * (d(x, z) + d(z, y))
            if violates(lhs, rhs):
                witness = Witness((x, z, y), {"K": constant}, lhs, rhs)
                break
    return AxiomReport(
        "b-metric",
        Verdict.FAIL if witness else Verdict.PASS,
        witness,
        trials=trials,
        note="K = {}".format(constant),
    )


def verify_t_monotone(
    space: GThetaSpace,
    trials: int = 1000,
    seed: int = 0,
    t_grid: Iterable[float] | None = None,
) -> AxiomReport:
    """Check the nonincreasing-in-t flag on sampled pairs over the t-grid."""
    grid = tuple(t_grid) if t_grid is not None else sampling.default_t_grid()
    if space.t_monotone is TMonotone.NONE:
        return AxiomReport(
            "t-monotone",
            Verdict.INDETERMINATE,
            trials=0,
            seed=seed,
            t_grid=grid,
            note="no monotonicity claimed",
        )
    gen = sampling.rng(seed)
    xs = space.carrier.sample(gen, trials)
    ys = space.carrier.sample(gen, trials)
    witness: Witness | None = None
    for x, y in zip(xs, ys):
        values = [eval_metric(space, x, y, t) for t in grid]
        for (t1, v1), (t2, v2) in itertools.pairwise(zip(grid, values)):
            if violates(v2, v1):
                witness = Witness((x, y), {"t1": t1, "t2": t2}, v2, v1)
                break
        if witness is not None:
            break
    return AxiomReport(
        "t-monotone",
        Verdict.FAIL if witness else Verdict.PASS,
        witness,
        trials=trials,
        seed=seed,
        t_grid=grid,
    )


def distance_row(space: GThetaSpace, x: Point, t: float) -> dict[Point, float]:
    """P(x, y, t) for every y of an enumerable carrier."""
    return {y: eval_metric(space, x, y, t) for y in space.carrier.points()}


def distance_table(
    space: GThetaSpace, xs: Sequence[Point], y: Point, t_grid: Sequence[float]
) -> np.ndarray:
    """P(x, y, t) for every x of `xs` (columns) and t of `t_grid` (rows).

    Spaces built as d/t from a b-metric evaluate d once per point.
    """
    table = np.empty((len(t_grid), len(xs)))
    if space.b_metric is None:
        for i, t in enumerate(t_grid):
            table[i] = [eval_metric(space, x, y, t) for x in xs]
        return table
    for point in (y, *xs):
        if not space.carrier.contains(point):
            raise DomainError(
                "Point {!r} is not in the carrier of {}.".format(point, space.name)
            )
    for t in t_grid:
        if not (t > 0):
            raise DomainError("Parameter t must be positive, got {}.".format(t))
    base = [space.b_metric(x, y) for x in xs]
    for i, t in enumerate(t_grid):
        table[i] = [b / t for b in base]
    return table

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

import numpy as np

from . import sampling
from .carriers import Point, point_from_json
from .errors import ConfigurationError, DomainError, PreconditionError
from .metric_core import distance_table
from .report import Verdict, to_jsonable
from .space import GThetaSpace
from .suzuki import get_map

logger = logging.getLogger(__name__)

# "For every p > 0" is checked on this grid unless another one is given.
SEQUENCE_T_GRID = sampling.power_grid(-5, 5)

# Share of the horizon used to estimate a limit from the tail.
TAIL_SHARE = 0.1
SETTLED_TOL = 1e-9

# Pairwise Cauchy checks use at most this many tail indices.
CAUCHY_POINTS = 100


@dataclass(frozen=True)
class SequenceSpec:
    """The terms s_0, ..., s_horizon of a sequence."""

    name: str
    generator: Callable[[int], Point]
    horizon: int
    description: str = ""

    def __post_init__(self):
        if self.horizon < 1:
            raise DomainError("A sequence needs a horizon of at least 1.")

    @cached_property
    def terms(self) -> tuple[Point, ...]:
        return tuple(self.generator(i) for i in range(self.horizon + 1))

    def with_horizon(self, horizon: int) -> SequenceSpec:
        return SequenceSpec(self.name, self.generator, horizon, self.description)


def _half_reciprocal(horizon: int) -> SequenceSpec:
    return SequenceSpec(
        "half_reciprocal",
        lambda i: Fraction(1, 2 * (i + 1)),
        horizon,
        "1/(2n) for n >= 1",
    )


def _constant(horizon: int, value: Any = 0) -> SequenceSpec:
    point = point_from_json(value)
    return SequenceSpec("constant", lambda i: point, horizon, "constant {}".format(point))


def _alternating(horizon: int, a: Any = 0, b: Any = 1) -> SequenceSpec:
    first, second = point_from_json(a), point_from_json(b)
    return SequenceSpec(
        "alternating",
        lambda i: first if i % 2 == 0 else second,
        horizon,
        "{}, {}, {}, ...".format(first, second, first),
    )


def _eventually_constant(
    horizon: int, value: Any = 0, other: Any = 1, switch: int = 10
) -> SequenceSpec:
    final, before = point_from_json(value), point_from_json(other)
    return SequenceSpec(
        "eventually_constant",
        lambda i: before if i < switch else final,
        horizon,
        "{} before index {}, {} from there on".format(before, switch, final),
    )


def _picard(horizon: int, map_name: str = "plane_T", start: Any = (7, 9)) -> SequenceSpec:
    fn = get_map(map_name)
    w0 = point_from_json(start)
    iterates = [w0]

    def nth(i: int) -> Point:
        while len(iterates) <= i:
            iterates.append(fn(iterates[-1]))
        return iterates[i]

    return SequenceSpec(
        "picard", nth, horizon, "iterates of {} from {}".format(map_name, w0)
    )


SEQUENCES: dict[str, Callable[..., SequenceSpec]] = {
    "half_reciprocal": _half_reciprocal,
    "constant": _constant,
    "alternating": _alternating,
    "eventually_constant": _eventually_constant,
    "picard": _picard,
}


def make_sequence(name: str, horizon: int, **params: Any) -> SequenceSpec:
    try:
        factory = SEQUENCES[name]
    except KeyError as err:
        raise ConfigurationError(
            "Unknown sequence {}, expected one of {}.".format(
                name, ", ".join(sorted(SEQUENCES))
            ),
            "/sequence",
        ) from err
    try:
        return factory(horizon, **params)
    except TypeError as err:
        raise ConfigurationError(
            "Sequence {} does not accept parameters {}.".format(name, sorted(params)),
            "/sequence",
        ) from err


def distance_trace(
    space: GThetaSpace, seq: SequenceSpec, point: Point, t_grid: Iterable[float]
) -> np.ndarray:
    """P(s_i, point, t) with one row per grid t and one column per index i."""
    return distance_table(space, seq.terms, point, tuple(t_grid))


def _window(row: np.ndarray) -> int:
    return max(1, int(len(row) * TAIL_SHARE))


def _tail(row: np.ndarray) -> tuple[float, bool]:
    """Mean of the last part of `row` and whether it has settled."""
    window = row[-_window(row) :]
    mean = float(np.mean(window))
    spread = float(np.max(window) - np.min(window))
    return mean, spread < SETTLED_TOL * (1 + abs(mean))


def _stalled(row: np.ndarray) -> bool:
    """Whether the last part of `row` comes no closer to zero than the part before it."""
    size = _window(row)
    last, before = row[-size:], row[-2 * size : -size]
    if before.size == 0:
        return False
    return float(np.max(last)) >= float(np.max(before)) * (1 - SETTLED_TOL)


@dataclass(frozen=True)
class ConvergenceReport:
    verdict: Verdict
    tail_index: Mapping[float, int | None]
    """Per t, the first N with P(s_i, limit, t) < eps for every i in [N, horizon]."""
    max_tail_distance: Mapping[float, float]
    t_grid: tuple[float, ...]
    eps: float
    horizon: int

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "tail_index": {str(t): n for t, n in self.tail_index.items()},
            "max_tail_distance": {
                str(t): to_jsonable(v) for t, v in self.max_tail_distance.items()
            },
            "t_grid": list(self.t_grid),
            "eps": self.eps,
            "horizon": self.horizon,
        }


def check_convergence(
    space: GThetaSpace,
    seq: SequenceSpec,
    limit: Point,
    t_grid: Iterable[float] | None = None,
    eps: float = 1e-3,
) -> ConvergenceReport:
    """Check lim P(s_i, limit, t) = 0 on the grid.

    The tail below eps must cover at least the last tenth of the horizon. A t without
    such a tail is a failure when the last tenth comes no closer to the limit than the
    tenth before it, and indeterminate when the distances are still falling.
    """
    if not eps > 0:
        raise DomainError("eps must be positive, got {}.".format(eps))
    grid = tuple(t_grid) if t_grid is not None else SEQUENCE_T_GRID
    table = distance_trace(space, seq, limit, grid)

    tail_index: dict[float, int | None] = {}
    max_tail: dict[float, float] = {}
    verdict = Verdict.PASS
    for t, row in zip(grid, table):
        above = np.nonzero(row >= eps)[0]
        start = 0 if above.size == 0 else int(above[-1]) + 1
        if start <= len(row) - _window(row):
            tail_index[t] = start
            max_tail[t] = float(np.max(row[start:]))
            continue
        tail_index[t] = None
        max_tail[t] = float(np.max(row[-_window(row) :]))
        if _stalled(row):
            verdict = Verdict.FAIL
        elif verdict is Verdict.PASS:
            verdict = Verdict.INDETERMINATE
    logger.debug("convergence of %s to %s: %s", seq.name, limit, verdict.value)
    return ConvergenceReport(verdict, tail_index, max_tail, grid, eps, seq.horizon)


@dataclass(frozen=True)
class CauchyReport:
    verdict: Verdict
    max_pair_distance: Mapping[float, float]
    t_grid: tuple[float, ...]
    eps: float

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "max_pair_distance": {
                str(t): to_jsonable(v) for t, v in self.max_pair_distance.items()
            },
            "t_grid": list(self.t_grid),
            "eps": self.eps,
        }


def _max_pair_distance(space: GThetaSpace, points: list[Point], t: float) -> float:
    best = 0.0
    for i, x in enumerate(points):
        row = distance_table(space, points[i + 1 :], x, (t,))
        if row.size:
            best = max(best, float(np.max(row)))
    return best


def check_cauchy(
    space: GThetaSpace,
    seq: SequenceSpec,
    t_grid: Iterable[float] | None = None,
    eps: float = 1e-3,
) -> CauchyReport:
    """Check that pair distances in the tail of the sequence fall below eps.

    All pairs of (at most CAUCHY_POINTS evenly spaced) indices of the last part of
    the horizon are compared, split into an earlier and a later half. The later half
    below eps passes; a later half no closer than the earlier one fails.
    """
    if not eps > 0:
        raise DomainError("eps must be positive, got {}.".format(eps))
    grid = tuple(t_grid) if t_grid is not None else SEQUENCE_T_GRID
    start = seq.horizon - max(1, int(seq.horizon * TAIL_SHARE))
    indices = np.unique(np.linspace(start, seq.horizon, CAUCHY_POINTS).astype(int))
    middle = len(indices) // 2
    earlier = [seq.terms[i] for i in indices[: middle + 1]]
    later = [seq.terms[i] for i in indices[middle:]]

    verdict = Verdict.PASS
    worst: dict[float, float] = {}
    for t in grid:
        late = _max_pair_distance(space, later, t)
        worst[t] = late
        if late < eps:
            continue
        early = _max_pair_distance(space, earlier, t)
        if late >= early * (1 - SETTLED_TOL):
            verdict = Verdict.FAIL
        elif verdict is Verdict.PASS:
            verdict = Verdict.INDETERMINATE
    return CauchyReport(verdict, worst, grid, eps)


@dataclass(frozen=True)
class UniqueLimitReport:
    verdict: Verdict
    first: ConvergenceReport
    second: ConvergenceReport

    @property
    def consistent(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "first": self.first.to_json(),
            "second": self.second.to_json(),
        }


def check_unique_limit(
    space: GThetaSpace,
    seq: SequenceSpec,
    limit1: Point,
    limit2: Point,
    t_grid: Iterable[float] | None = None,
    eps: float = 1e-3,
) -> UniqueLimitReport:
    """Fails only if the sequence converges to both limits, which would contradict the
    uniqueness of limits."""
    if limit1 == limit2:
        raise PreconditionError("The two limits must differ, got {!r} twice.".format(limit1))
    first = check_convergence(space, seq, limit1, t_grid, eps)
    second = check_convergence(space, seq, limit2, t_grid, eps)
    both = first.verdict is Verdict.PASS and second.verdict is Verdict.PASS
    if both:
        logger.warning("%s converges to both %s and %s", seq.name, limit1, limit2)
    return UniqueLimitReport(Verdict.FAIL if both else Verdict.PASS, first, second)


@dataclass(frozen=True)
class ContinuityReport:
    verdict: Verdict
    continuous: bool | None
    tail_values: Mapping[float, float] = field(default_factory=dict[float, float])
    point_values: Mapping[float, float] = field(default_factory=dict[float, float])
    note: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "continuous": self.continuous,
            "tail_values": {str(t): to_jsonable(v) for t, v in self.tail_values.items()},
            "point_values": {str(t): to_jsonable(v) for t, v in self.point_values.items()},
            "note": self.note,
        }


def check_sequential_continuity(
    space: GThetaSpace,
    seq: SequenceSpec,
    limit: Point,
    probe: Point,
    t_grid: Iterable[float] | None = None,
    eps: float = 1e-3,
) -> ContinuityReport:
    """Compare lim P(s_i, probe, t), estimated from the tail, with P(limit, probe, t).

    Returns:
        A failing report when the two differ at some grid t, an indeterminate one when
        the sequence does not converge to `limit` or the tail has not settled. A probe
        at the limit has tail value 0, which the convergence check established.
    """
    grid = tuple(t_grid) if t_grid is not None else SEQUENCE_T_GRID
    convergence = check_convergence(space, seq, limit, grid, eps)
    if convergence.verdict is not Verdict.PASS:
        return ContinuityReport(
            Verdict.INDETERMINATE, None, note="sequence does not converge to the limit"
        )

    table = distance_trace(space, seq, probe, grid)
    tails: dict[float, float] = {}
    points: dict[float, float] = {}
    for t, row in zip(grid, table):
        mean, settled = (0.0, True) if probe == limit else _tail(row)
        if not settled:
            return ContinuityReport(
                Verdict.INDETERMINATE, None, note="tail not settled at t = {}".format(t)
            )
        tails[t] = mean
        points[t] = float(distance_table(space, (limit,), probe, (t,))[0, 0])

    continuous = all(
        abs(tails[t] - points[t]) <= SETTLED_TOL * max(1.0, abs(points[t])) for t in grid
    )
    return ContinuityReport(
        Verdict.PASS if continuous else Verdict.FAIL, continuous, tails, points
    )

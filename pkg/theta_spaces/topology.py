from __future__ import annotations

import enum
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import sampling
from .actions import solve_action
from .carriers import CountableCarrier, FiniteCarrier, Point
from .errors import DomainError, PreconditionError, SearchExhaustedError, UnsupportedError
from .metric_core import distance_table, eval_metric
from .report import Verdict, Witness, to_jsonable
from .sequences import SequenceSpec, check_convergence
from .space import GThetaSpace

logger = logging.getLogger(__name__)

HAUSDORFF_K_MAX = 64

# Candidate limits tried per probe sequence by is_closed_set.
LIMIT_CANDIDATES = 5

# On a truncated carrier, outside points accumulate at a center when the nearest one
# comes at least this much closer as the truncation depth doubles.
ACCUMULATION_RATIO = 0.75


class BallKind(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float
    t: float
    kind: BallKind = BallKind.OPEN

    def __post_init__(self):
        if not (self.radius > 0 and self.t > 0):
            raise DomainError(
                "A ball needs a positive radius and t, got {} and {}.".format(
                    self.radius, self.t
                )
            )

    def admits(self, value: float) -> bool:
        """Whether a point at distance `value` from the center is a member."""
        return value < self.radius if self.kind is BallKind.OPEN else value <= self.radius

    def to_json(self) -> dict[str, Any]:
        return {
            "center": to_jsonable(self.center),
            "radius": self.radius,
            "t": self.t,
            "kind": self.kind.value,
        }


def _points_with(space: GThetaSpace, extra: Iterable[Point]) -> tuple[Point, ...]:
    points = space.carrier.points()
    known = set(points)
    return points + tuple(p for p in dict.fromkeys(extra) if p not in known)


def ball_members(space: GThetaSpace, ball: Ball) -> frozenset[Point]:
    """Every point of an enumerable carrier inside the ball.

    Raises:
        UnsupportedError: For a carrier that can only be sampled.
    """
    points = _points_with(space, (ball.center,))
    row = distance_table(space, points, ball.center, (ball.t,))[0]
    return frozenset(p for p, value in zip(points, row) if ball.admits(float(value)))


def default_radius_grid(base: float = 1.0) -> tuple[float, ...]:
    return sampling.power_grid(-20, 0, base)


@dataclass(frozen=True)
class SetReport:
    """Verdict of a set-level property. Passing verdicts are relative to the grids."""

    check: str
    verdict: Verdict
    witness: Witness | None = None
    escapes: tuple[tuple[float, Point], ...] = ()
    """For a set that is not open: radius and an escaping ball member."""
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else self.witness.to_json(),
            "escapes": [[r, to_jsonable(p)] for r, p in self.escapes],
            "note": self.note,
        }


def is_open_set(
    space: GThetaSpace,
    subset: Iterable[Point],
    radius_grid: Iterable[float] | None = None,
    t_grid: Iterable[float] | None = None,
) -> SetReport:
    """Check that every a of the set has, for every grid q, a grid radius ð with
    ℬ(a, ð, q) inside the set.

    The failing witness is a center a, a q and the member of ℬ(a, ð, q) closest to a
    outside the set, which escapes every grid radius.

    On a truncated countable carrier the truncation hides the points below its last
    level, so a center also fails when the nearest outside point at full depth is closer
    than `ACCUMULATION_RATIO` times the nearest one at half depth: the outside points
    accumulate at the center and every radius eventually lets one in.
    """
    members = frozenset(subset)
    radii = sorted(radius_grid) if radius_grid is not None else default_radius_grid()
    grid = tuple(t_grid) if t_grid is not None else sampling.default_t_grid()
    carrier = space.carrier
    points = carrier.points()
    outside = [p for p in points if p not in members]
    ordered = [p for p in points if p in members]
    enumerated = set(ordered)
    ordered += [p for p in members if p not in enumerated]
    if not outside:
        return SetReport("open", Verdict.PASS, note="the set is the whole carrier")

    coarse: list[int] = []
    if isinstance(carrier, CountableCarrier) and carrier.depth >= 4:
        shallow = set(carrier.enumerate_fn(carrier.depth // 2))
        coarse = [i for i, p in enumerate(outside) if p in shallow]

    for a in ordered:
        table = distance_table(space, outside, a, grid)
        for q, row in zip(grid, table):
            nearest = int(np.argmin(row))
            gap = float(row[nearest])
            escape = outside[nearest]
            if gap < radii[0]:
                witness = Witness(
                    (a, escape), {"t": q, "radius": radii[0]}, gap, radii[0], "lhs < rhs"
                )
            elif coarse and gap < ACCUMULATION_RATIO * float(np.min(row[coarse])):
                witness = Witness(
                    (a, escape),
                    {"t": q, "depth": carrier.depth // 2},
                    gap,
                    ACCUMULATION_RATIO * float(np.min(row[coarse])),
                    "lhs < rhs",
                )
            else:
                continue
            logger.info("open check on %s fails at %s, q = %s", space.name, a, q)
            return SetReport(
                "open",
                Verdict.FAIL,
                witness,
                tuple((r, escape) for r in radii),
                note="no grid radius keeps the ball inside the set",
            )
    return SetReport("open", Verdict.PASS, note="relative to the radius and t grids")


def is_closed_set(
    space: GThetaSpace,
    subset: Iterable[Point],
    probes: Sequence[SequenceSpec],
    t_grid: Iterable[float] | None = None,
    eps: float = 1e-3,
) -> SetReport:
    """Refute closedness by a probe sequence of the set converging outside of it.

    Limits are searched among the carrier points outside the set, nearest to the last
    term of the probe first.
    """
    members = frozenset(subset)
    outside = [p for p in space.carrier.points() if p not in members]
    for seq in probes:
        terms = seq.terms
        strays = [p for p in terms if p not in members]
        if strays:
            raise PreconditionError(
                "Probe {} leaves the set at {!r}.".format(seq.name, strays[0])
            )
        if not outside:
            continue
        row = distance_table(space, outside, terms[-1], (1.0,))[0]
        for i in np.argsort(row, kind="stable")[:LIMIT_CANDIDATES]:
            limit = outside[int(i)]
            report = check_convergence(space, seq, limit, t_grid, eps)
            if report.verdict is Verdict.PASS:
                t = report.t_grid[0]
                witness = Witness(
                    (limit,),
                    {"t": t},
                    report.max_tail_distance[t],
                    eps,
                    "lhs < rhs and the limit lies outside the set",
                )
                return SetReport(
                    "closed", Verdict.FAIL, witness, note="{} converges outside".format(seq.name)
                )
    return SetReport("closed", Verdict.PASS, note="no probe sequence refutes closedness")


@dataclass(frozen=True)
class HausdorffWitness:
    t0: float
    k: int
    first: Ball
    second: Ball
    first_members: frozenset[Point]
    second_members: frozenset[Point]

    def to_json(self) -> dict[str, Any]:
        return {
            "t0": self.t0,
            "k": self.k,
            "first": self.first.to_json(),
            "second": self.second.to_json(),
            "first_members": [to_jsonable(p) for p in sorted(self.first_members, key=repr)],
            "second_members": [to_jsonable(p) for p in sorted(self.second_members, key=repr)],
        }


def hausdorff_witness(
    space: GThetaSpace,
    x: Point,
    y: Point,
    k_max: int = HAUSDORFF_K_MAX,
    t_grid: Iterable[float] | None = None,
) -> HausdorffWitness:
    """Separate x and y by disjoint open balls.

    With t0 the first grid t where P(x, y, t0) > 0 and a_k = P(x, y, t0) / k, a_k is
    split as θ(b_k, c_k) with b_k = a_k / 2; the balls are ℬ(x, b_k, t0 / 2) and
    ℬ(y, c_k, t0 / 2) for the first k whose balls have no common member.

    Raises:
        PreconditionError: If x = y or P(x, y, t) vanishes on the whole grid.
        SearchExhaustedError: If no k <= k_max separates the points.
    """
    if x == y:
        raise PreconditionError("Hausdorff separation needs two distinct points.")
    grid = tuple(t_grid) if t_grid is not None else sampling.default_t_grid()
    t0 = next((t for t in grid if eval_metric(space, x, y, t) > 0), None)
    if t0 is None:
        raise PreconditionError(
            "P({!r}, {!r}, t) vanishes on the whole t-grid.".format(x, y)
        )
    gap = eval_metric(space, x, y, t0)
    for k in range(1, k_max + 1):
        a_k = gap / k
        b_k = a_k / 2
        c_k = solve_action(space.action, a_k, b_k)
        if not (b_k > 0 and c_k > 0):
            continue
        first = Ball(x, b_k, t0 / 2)
        second = Ball(y, c_k, t0 / 2)
        first_members = ball_members(space, first)
        second_members = ball_members(space, second)
        if first_members.isdisjoint(second_members):
            logger.debug("separated %s and %s at k = %d", x, y, k)
            return HausdorffWitness(t0, k, first, second, first_members, second_members)
    raise SearchExhaustedError(
        "No k <= {} separates {!r} and {!r} in {}.".format(k_max, x, y, space.name), k_max
    )


def closure_meets_ball(
    space: GThetaSpace, subset: Iterable[Point], x: Point, r: float, t: float
) -> bool:
    """Whether some a of the finite set has P(x, a, t) < r."""
    return any(eval_metric(space, x, a, t) < r for a in subset)


@dataclass(frozen=True)
class OpenBallCondition:
    verdict: Verdict
    h_value: float
    condition_holds: bool | None

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "h_value": to_jsonable(self.h_value),
            "condition_holds": self.condition_holds,
        }


def open_ball_sufficiency(
    space: GThetaSpace, ball: Ball, iterations: int = 200
) -> OpenBallCondition:
    """h(ð, α): the largest δ with f(s) < f(ð) - α for every 0 < s < δ, and whether
    ð < h(ð, α), under which the open ball is an open set.

    The inverse of the control function is used when known, bisection otherwise. Since
    f is non-decreasing, ð < h(ð, α) is decided as f(ð) < f(ð) - α, free of the
    rounding of h.
    """
    if ball.kind is not BallKind.OPEN:
        raise PreconditionError("The sufficient condition is about open balls.")
    control = space.control
    target = control.f(ball.radius) - control.alpha

    if control.inverse is not None:
        try:
            h = max(0.0, float(control.inverse(target)))
        except (ValueError, OverflowError, ZeroDivisionError):
            h = math.nan
    else:
        hi = ball.radius
        lo = ball.radius * 2.0**-60
        if not control.f(lo) < target:
            h = math.nan
        else:
            for _ in range(iterations):
                mid = (lo + hi) / 2
                if control.f(mid) < target:
                    lo = mid
                else:
                    hi = mid
            h = lo
    if math.isnan(h):
        return OpenBallCondition(Verdict.INDETERMINATE, h, None)
    holds = control.f(ball.radius) < target
    return OpenBallCondition(Verdict.PASS if holds else Verdict.FAIL, h, holds)


def closed_ball_sufficiency(
    space: GThetaSpace,
    ball: Ball,
    probes: Sequence[tuple[SequenceSpec, Point]],
    t_grid: Iterable[float] | None = None,
) -> SetReport:
    """Check P(center, limit, t) <= lim sup P(center, s_i, t) for every probe sequence
    and its limit, the condition under which a closed ball is a closed set."""
    if ball.kind is not BallKind.CLOSED:
        raise PreconditionError("The sufficient condition is about closed balls.")
    grid = tuple(t_grid) if t_grid is not None else (ball.t,)
    for seq, limit in probes:
        table = distance_table(space, seq.terms, ball.center, grid)
        for t, row in zip(grid, table):
            window = row[-max(1, len(row) // 10) :]
            upper = float(np.max(window))
            at_limit = eval_metric(space, ball.center, limit, t)
            if at_limit > upper * (1 + 1e-9):
                return SetReport(
                    "closed-ball-condition",
                    Verdict.FAIL,
                    Witness((ball.center, limit), {"t": t}, at_limit, upper),
                    note="probe {} violates the condition".format(seq.name),
                )
    return SetReport("closed-ball-condition", Verdict.PASS)


def closure_points(
    space: GThetaSpace,
    subset: Iterable[Point],
    radius_grid: Iterable[float] | None = None,
    t_grid: Iterable[float] | None = None,
) -> frozenset[Point]:
    """Carrier points x with ℬ(x, r, t) meeting the set for every grid r and t."""
    members = tuple(dict.fromkeys(subset))
    if not members:
        return frozenset()
    smallest = min(radius_grid) if radius_grid is not None else default_radius_grid()[0]
    grid = tuple(t_grid) if t_grid is not None else sampling.default_t_grid()
    return frozenset(
        x
        for x in space.carrier.points()
        if all(closure_meets_ball(space, members, x, smallest, t) for t in grid)
    )


def finite_compactness_sanity(
    space: GThetaSpace, probes: Sequence[SequenceSpec] | None = None
) -> SetReport:
    """On a finite carrier every sequence repeats some point infinitely often, so it has a
    constant, hence convergent, subsequence. Checks that for each probe the most
    frequent term is a carrier point at distance 0 from itself on the grid."""
    if not isinstance(space.carrier, FiniteCarrier):
        raise UnsupportedError("{} does not have a finite carrier.".format(space.name))
    points = space.carrier.points()
    if probes is None:
        probes = [
            SequenceSpec("cycle", lambda i: points[i % len(points)], 4 * len(points))
        ]
    for seq in probes:
        counts: dict[Point, int] = {}
        for term in seq.terms:
            counts[term] = counts.get(term, 0) + 1
        value = max(counts, key=lambda p: counts[p])
        if not space.carrier.contains(value) or any(
            eval_metric(space, value, value, t) != 0 for t in sampling.default_t_grid()
        ):
            return SetReport(
                "finite-compactness",
                Verdict.FAIL,
                Witness((value,), {}, math.nan, 0.0, "constant subsequence converges"),
            )
    return SetReport("finite-compactness", Verdict.PASS)

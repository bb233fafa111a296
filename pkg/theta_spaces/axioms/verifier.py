from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .. import sampling
from ..carriers import Point
from ..errors import DomainError
from ..metric_core import eval_metric
from ..report import AxiomReport, Verdict, Witness, violates
from ..shrinking import candidates, positive_candidates, shrink
from ..space import GThetaSpace

logger = logging.getLogger(__name__)

BATCH_SIZE = 1000

Args = tuple[Any, ...]
Sides = tuple[float, float]


@dataclass(frozen=True)
class _Inequality:
    """One universally quantified inequality lhs <= rhs over (points..., params...).

    `sides` returns None when the premise of the axiom does not hold (a vacuous
    sample).
    """

    label: str
    point_slots: int
    param_names: tuple[str, ...]
    sides: Callable[[Args], Sides | None]


def _grid(t_grid: Iterable[float] | None) -> tuple[float, ...]:
    return tuple(t_grid) if t_grid is not None else sampling.default_t_grid()


def _sample(
    space: GThetaSpace,
    gen: np.random.Generator,
    inequality: _Inequality,
    grid: Sequence[float],
    size: int,
) -> list[Args]:
    slots = inequality.point_slots
    points = space.carrier.sample(gen, slots * size)
    params = gen.integers(len(grid), size=(size, len(inequality.param_names)))
    return [
        tuple(points[i * slots : (i + 1) * slots]) + tuple(grid[int(j)] for j in row)
        for i, row in enumerate(params)
    ]


def _probe_args(
    space: GThetaSpace, inequality: _Inequality, grid: Sequence[float]
) -> Iterator[Args]:
    if not space.probes:
        return
    # every other grid value keeps the exhaustive probe phase small
    params = grid if len(inequality.param_names) == 1 else grid[::2]
    for points in itertools.product(space.probes, repeat=inequality.point_slots):
        for values in itertools.product(params, repeat=len(inequality.param_names)):
            yield points + values


def _witness(inequality: _Inequality, args: Args, sides: Sides) -> Witness:
    n = inequality.point_slots
    return Witness(
        tuple(args[:n]),
        dict(zip(inequality.param_names, args[n:])),
        sides[0],
        sides[1],
    )


def _violation(inequality: _Inequality, args: Args) -> Sides | None:
    try:
        sides = inequality.sides(args)
    except DomainError:
        return None
    if sides is None or not violates(*sides):
        return None
    return sides


def _run(
    space: GThetaSpace,
    inequality: _Inequality,
    trials: int,
    seed: int,
    grid: tuple[float, ...],
) -> AxiomReport:
    """Probe points exhaustively, then `trials` seeded samples in batches; the first
    sampled violation is shrunk by halving points and parameters."""
    if trials < 1:
        raise DomainError("Verification needs at least one trial.")
    logger.info("verifying %s on %s (%d trials)", inequality.label, space.name, trials)

    witness: Witness | None = None
    vacuous = 0

    for args in _probe_args(space, inequality, grid):
        sides = _violation(inequality, args)
        if sides is not None:
            witness = _witness(inequality, args, sides)
            break

    n = inequality.point_slots

    def proposals(i: int, value: Any) -> Iterator[Any]:
        return candidates(value) if i < n else positive_candidates(value)

    for batch in range(-(-trials // BATCH_SIZE)):
        if witness is not None:
            break
        size = min(BATCH_SIZE, trials - batch * BATCH_SIZE)
        gen = sampling.rng(seed, batch)
        logger.debug("%s batch %d on %s", inequality.label, batch, space.name)
        for args in _sample(space, gen, inequality, grid, size):
            sides = inequality.sides(args)
            if sides is None:
                vacuous += 1
                continue
            if not violates(*sides):
                continue
            shrunk = shrink(args, lambda a: _violation(inequality, a) is not None, proposals)
            sides = _violation(inequality, shrunk)
            assert sides is not None
            witness = _witness(inequality, shrunk, sides)
            break

    if witness is not None:
        logger.info("%s fails on %s: %s", inequality.label, space.name, witness)
    return AxiomReport(
        inequality.label,
        Verdict.FAIL if witness else Verdict.PASS,
        witness,
        trials=trials,
        seed=seed,
        t_grid=grid,
        vacuous=vacuous,
        note="pass is relative to the sampled points and the t-grid" if witness is None else "",
    )


def _premise(space: GThetaSpace, grid: Sequence[float]) -> Callable[[Point, Point], bool]:
    """P(x, w, r) > 0 for every r of the grid, memoized per pair."""
    cache: dict[tuple[Point, Point], bool] = {}

    def holds(x: Point, w: Point) -> bool:
        try:
            return cache[(x, w)]
        except KeyError:
            pass
        value = all(eval_metric(space, x, w, r) > 0 for r in grid)
        cache[(x, w)] = value
        return value

    return holds


def gtheta2_sides(space: GThetaSpace, x: Point, w: Point, mu: Point, s: float, p: float) -> Sides:
    """f(P(x, w, s + p)) and f(θ(P(x, μ, s), P(μ, w, p))) + α."""
    f = space.control.f
    lhs = f(eval_metric(space, x, w, s + p))
    rhs = f(space.action(eval_metric(space, x, mu, s), eval_metric(space, mu, w, p)))
    return lhs, rhs + space.control.alpha


def parametric_triangle_sides(
    space: GThetaSpace, a: Point, nu: Point, x: Point, s: float, p: float
) -> Sides:
    """P(a, ν, s + p) and P(a, x, s) o P(x, ν, p)."""
    lhs = eval_metric(space, a, nu, s + p)
    return lhs, space.action(eval_metric(space, a, x, s), eval_metric(space, x, nu, p))


def theta_triangle_sides(space: GThetaSpace, x: Point, y: Point, z: Point, t: float) -> Sides:
    """P(x, y, t) and θ(P(x, z, t), P(z, y, t))."""
    lhs = eval_metric(space, x, y, t)
    return lhs, space.action(eval_metric(space, x, z, t), eval_metric(space, z, y, t))


def _identity_report(
    space: GThetaSpace, trials: int, seed: int, grid: tuple[float, ...]
) -> AxiomReport:
    gen = sampling.rng(seed)
    pairs = list(itertools.product(space.probes, repeat=2))
    sampled = space.carrier.sample(gen, 2 * trials)
    pairs += list(zip(sampled[::2], sampled[1::2]))

    witness: Witness | None = None
    for x, y in pairs:
        for t in grid:
            value = eval_metric(space, x, x, t)
            if value != 0:
                witness = Witness((x, x), {"t": t}, value, 0.0, "lhs == rhs")
                break
        if witness is None and x != y:
            top = max(eval_metric(space, x, y, t) for t in grid)
            if not top > 0:
                witness = Witness((x, y), {}, top, 0.0, "lhs > rhs for some t")
        if witness is not None:
            break
    return AxiomReport(
        "Ptheta1",
        Verdict.FAIL if witness else Verdict.PASS,
        witness,
        trials=len(pairs),
        seed=seed,
        t_grid=grid,
    )


def _symmetry_report(
    space: GThetaSpace, trials: int, seed: int, grid: tuple[float, ...]
) -> AxiomReport:
    if not space.symmetric:
        return AxiomReport(
            "symmetry", Verdict.INDETERMINATE, trials=0, seed=seed, note="not claimed"
        )
    gen = sampling.rng(seed + 1)
    sampled = space.carrier.sample(gen, 2 * trials)
    witness: Witness | None = None
    for x, y in zip(sampled[::2], sampled[1::2]):
        t = sampling.pick(gen, grid)
        forward, backward = eval_metric(space, x, y, t), eval_metric(space, y, x, t)
        if forward != backward:
            witness = Witness((x, y), {"t": t}, forward, backward, "lhs == rhs")
            break
    return AxiomReport(
        "symmetry",
        Verdict.FAIL if witness else Verdict.PASS,
        witness,
        trials=trials,
        seed=seed,
        t_grid=grid,
    )


def verify_gtheta(
    space: GThetaSpace,
    trials: int = 10_000,
    seed: int = 0,
    t_grid: Iterable[float] | None = None,
) -> list[AxiomReport]:
    """Check (Pθ1), (Pθ2) and the symmetry flag of a space with its attached pair.

    (Pθ2) is only asserted for samples (x, w, μ, s, p) whose premise P(x, w, r) > 0
    holds on the whole t-grid; other samples are counted as vacuous.

    Returns:
        Reports labelled Ptheta1, Ptheta2 and symmetry.
    """
    grid = _grid(t_grid)
    premise = _premise(space, grid)

    def sides(args: Args) -> Sides | None:
        x, w, mu, s, p = args
        if x == w or not premise(x, w):
            return None
        return gtheta2_sides(space, x, w, mu, s, p)

    inequality = _Inequality("Ptheta2", 3, ("s", "p"), sides)
    return [
        _identity_report(space, min(trials, 2000), seed, grid),
        _run(space, inequality, trials, seed, grid),
        _symmetry_report(space, min(trials, 2000), seed, grid),
    ]


def verify_parametric_triangle(
    space: GThetaSpace,
    trials: int = 10_000,
    seed: int = 0,
    t_grid: Iterable[float] | None = None,
) -> AxiomReport:
    """Check P(a, ν, s + p) <= P(a, x, s) o P(x, ν, p) with the attached action as
    `o`, without control function or slack."""
    grid = _grid(t_grid)

    def sides(args: Args) -> Sides:
        a, nu, x, s, p = args
        return parametric_triangle_sides(space, a, nu, x, s, p)

    return _run(space, _Inequality("PP3", 3, ("s", "p"), sides), trials, seed, grid)


def verify_theta_parametric(
    space: GThetaSpace,
    trials: int = 10_000,
    seed: int = 0,
    t_grid: Iterable[float] | None = None,
) -> AxiomReport:
    """Check the same-parameter θ-triangle P(x, y, t) <= θ(P(x, z, t), P(z, y, t))."""
    grid = _grid(t_grid)

    def sides(args: Args) -> Sides:
        x, y, z, t = args
        return theta_triangle_sides(space, x, y, z, t)

    return _run(space, _Inequality("dtheta3", 3, ("t",), sides), trials, seed, grid)

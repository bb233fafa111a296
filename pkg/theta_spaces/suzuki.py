from __future__ import annotations

import enum
import itertools
import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from . import sampling
from .carriers import FiniteCarrier, Point
from .errors import ConfigurationError, DomainError
from .metric_core import eval_metric
from .report import AxiomReport, Verdict, Witness, to_jsonable, violates
from .space import GThetaSpace

logger = logging.getLogger(__name__)

GOLDEN_CONJUGATE = (math.sqrt(5) - 1) / 2
INV_SQRT2 = 1 / math.sqrt(2)

# Step distances below this are treated as zero by estimate_contraction.
RATIO_FLOOR = 1e-14


def psi(u: float) -> float:
    """The threshold function of Suzuki's theorem, [0, 1) -> (1/2, 1].

    Raises:
        DomainError: If u is not in [0, 1).
    """
    if not (0 <= u < 1):
        raise DomainError("psi is defined on [0, 1), got {}.".format(u))
    if u <= GOLDEN_CONJUGATE:
        return 1.0
    if u <= INV_SQRT2:
        return (1 - u) / u**2
    return 1 / (1 + u)


@dataclass(frozen=True)
class SelfMap:
    name: str
    apply: Callable[[Point], Point]
    description: str = ""

    def __call__(self, x: Point) -> Point:
        return self.apply(x)


_MAPS: dict[str, Callable[..., SelfMap]] = {}


def register_map(name: str, factory: Callable[..., SelfMap]) -> Callable[..., SelfMap]:
    if name in _MAPS:
        raise ConfigurationError("Map {} is already registered.".format(name), "/map")
    _MAPS[name] = factory
    return factory


def get_map(name: str, **params: Any) -> SelfMap:
    """Build a catalog map by name, e.g. get_map("fde_H", problem=...)."""
    try:
        factory = _MAPS[name]
    except KeyError as err:
        raise ConfigurationError(
            "Unknown map {}, expected one of {}.".format(name, ", ".join(sorted(_MAPS))),
            "/map",
        ) from err
    try:
        return factory(**params)
    except TypeError as err:
        raise ConfigurationError(
            "Map {} does not accept parameters {}.".format(name, sorted(params)), "/map"
        ) from err


def maps() -> list[str]:
    return sorted(_MAPS)


_PLANE_T = {(3, 3): (3, 3), (7, 3): (3, 3), (3, 7): (3, 3), (7, 9): (7, 3)}


def _plane_t() -> SelfMap:
    return SelfMap(
        "plane_T",
        lambda x: _PLANE_T[tuple(x)],
        "(3,3), (7,3), (3,7) -> (3,3) and (7,9) -> (7,3)",
    )


def _plane_s() -> SelfMap:
    table = {**_PLANE_T, (9, 7): (3, 7)}
    return SelfMap("plane_S", lambda x: table[tuple(x)], "plane_T extended by (9,7) -> (3,7)")


register_map("plane_T", _plane_t)
register_map("plane_S", _plane_s)
register_map("identity", lambda: SelfMap("identity", lambda x: x, "x -> x"))


class Variant(enum.Enum):
    GENERAL = "general"
    BANACH = "banach"
    KANNAN = "kannan"


class PremiseForm(enum.Enum):
    X_TX = "x_Tx"
    X_TY = "x_Ty"


@dataclass(frozen=True)
class SuzukiConfig:
    u: float
    variant: Variant = Variant.GENERAL
    premise_form: PremiseForm = PremiseForm.X_TX
    t_grid: tuple[float, ...] = field(default_factory=sampling.default_t_grid)
    pair_samples: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.u < 1):
            raise DomainError("u must be in [0, 1), got {}.".format(self.u))
        if self.pair_samples < 1:
            raise DomainError("pair_samples must be at least 1.")


def m_value(space: GThetaSpace, fn: SelfMap, x: Point, y: Point, t: float) -> float:
    """max(P(x, y), P(x, Tx), P(y, Ty), (P(x, Ty) + P(y, Tx)) / 2) at t."""
    tx, ty = fn(x), fn(y)
    return max(
        eval_metric(space, x, y, t),
        eval_metric(space, x, tx, t),
        eval_metric(space, y, ty, t),
        (eval_metric(space, x, ty, t) + eval_metric(space, y, tx, t)) / 2,
    )


def _premise(
    space: GThetaSpace, fn: SelfMap, form: PremiseForm, factor: float, x: Point, y: Point, t: float
) -> bool:
    image = fn(x) if form is PremiseForm.X_TX else fn(y)
    return factor * eval_metric(space, x, image, t) <= eval_metric(space, x, y, t)


def _consequent(
    space: GThetaSpace, fn: SelfMap, variant: Variant, u: float, x: Point, y: Point, t: float
) -> tuple[float, float]:
    lhs = eval_metric(space, fn(x), fn(y), t)
    if variant is Variant.GENERAL:
        return lhs, u * m_value(space, fn, x, y, t)
    if variant is Variant.BANACH:
        return lhs, u * eval_metric(space, x, y, t)
    return lhs, (u / 2) * (eval_metric(space, x, fn(y), t) + eval_metric(space, y, fn(x), t))


def _pairs(space: GThetaSpace, config: SuzukiConfig) -> list[tuple[Point, Point]]:
    if isinstance(space.carrier, FiniteCarrier):
        return list(itertools.product(space.carrier.points(), repeat=2))
    gen = sampling.rng(config.seed)
    xs = space.carrier.sample(gen, config.pair_samples)
    ys = space.carrier.sample(gen, config.pair_samples)
    return list(zip(xs, ys))


def verify_suzuki(space: GThetaSpace, fn: SelfMap, config: SuzukiConfig) -> AxiomReport:
    """Check the Suzuki-type contraction of `fn` over pairs and the t-grid.

    Pairs are exhaustive on a finite carrier and sampled otherwise. Samples whose
    premise fails are counted as vacuous.
    """
    factor = psi(config.u)
    checked = vacuous = 0
    witness: Witness | None = None
    for x, y in _pairs(space, config):
        for t in config.t_grid:
            if not _premise(space, fn, config.premise_form, factor, x, y, t):
                vacuous += 1
                continue
            checked += 1
            lhs, rhs = _consequent(space, fn, config.variant, config.u, x, y, t)
            if violates(lhs, rhs):
                witness = Witness((x, y), {"s": t}, lhs, rhs)
                break
        if witness is not None:
            break
    logger.info(
        "suzuki %s on %s: %d checked, %d vacuous",
        config.variant.value,
        space.name,
        checked,
        vacuous,
    )
    return AxiomReport(
        "suzuki-{}".format(config.variant.value),
        Verdict.FAIL if witness else Verdict.PASS,
        witness,
        trials=checked + vacuous,
        seed=config.seed,
        t_grid=config.t_grid,
        vacuous=vacuous,
        note="u = {}, premise {}".format(config.u, config.premise_form.value),
    )


@dataclass(frozen=True)
class PremiseReport:
    solvable: bool
    solutions: tuple[float, ...]
    r_grid: tuple[float, ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "solvable": self.solvable,
            "solutions": list(self.solutions),
            "r_grid_size": len(self.r_grid),
        }


def premise_solvable(
    space: GThetaSpace,
    fn: SelfMap,
    x: Point,
    y: Point,
    r_grid: Iterable[float] | None = None,
    t_grid: Iterable[float] | None = None,
) -> PremiseReport:
    """The r of the grid for which ψ(r) P(x, Tx, t) <= P(x, y, t) holds at every grid t."""
    rs = tuple(r_grid) if r_grid is not None else tuple(i / 100 for i in range(100))
    ts = tuple(t_grid) if t_grid is not None else sampling.default_t_grid()
    solutions = tuple(
        r for r in rs if all(_premise(space, fn, PremiseForm.X_TX, psi(r), x, y, t) for t in ts)
    )
    return PremiseReport(bool(solutions), solutions, rs)


@dataclass(frozen=True)
class FixedPointResult:
    fixed_point: Point
    iterations: int
    step_distances: tuple[tuple[float, ...], ...]
    """P(w_{i+1}, w_i, t) per application (rows) and grid t (columns)."""
    converged: bool
    observed_ratio: float | None
    t_grid: tuple[float, ...]
    trace: tuple[Point, ...] = ()

    @property
    def residual(self) -> float:
        return max(self.step_distances[-1]) if self.step_distances else math.nan

    def to_json(self) -> dict[str, Any]:
        return {
            "fixed_point": to_jsonable(self.fixed_point),
            "iterations": self.iterations,
            "converged": self.converged,
            "observed_ratio": self.observed_ratio,
            "residual": to_jsonable(self.residual),
            "t_grid": list(self.t_grid),
        }


def _ratio(step_distances: Sequence[Sequence[float]]) -> float | None:
    ratios = [
        now / before
        for previous, current in itertools.pairwise(step_distances)
        for before, now in zip(previous, current)
        if before >= RATIO_FLOOR
    ]
    return max(ratios) if ratios else None


def iterate_fixed_point(
    space: GThetaSpace,
    fn: SelfMap,
    w0: Point,
    tol: float = 1e-10,
    max_iter: int = 1000,
    t_grid: Iterable[float] | None = None,
    keep_trace: bool = True,
) -> FixedPointResult:
    """Picard iteration w_{i+1} = T(w_i) from w0.

    Stops at the first iterate w with P(T(w), w, t) < tol for every grid t; that w is
    the fixed point and `iterations` counts the applications before it. Reaching
    `max_iter` gives a result with converged = False.
    """
    if not tol > 0:
        raise DomainError("tol must be positive, got {}.".format(tol))
    if max_iter < 1:
        raise DomainError("max_iter must be at least 1.")
    grid = tuple(t_grid) if t_grid is not None else sampling.default_t_grid()

    w = w0
    trace: list[Point] = [w0]
    steps: list[tuple[float, ...]] = []
    converged = False
    logger.info("iterating %s on %s", fn.name, space.name)
    for i in range(max_iter):
        image = fn(w)
        distances = tuple(eval_metric(space, image, w, t) for t in grid)
        steps.append(distances)
        logger.debug("step %d: %s", i, max(distances))
        if all(d < tol for d in distances):
            converged = True
            break
        w = image
        if keep_trace:
            trace.append(w)

    iterations = len(steps) - 1 if converged else len(steps)
    logger.info(
        "%s %s after %d iterations", fn.name, "converged" if converged else "stopped", iterations
    )
    return FixedPointResult(
        w,
        iterations,
        tuple(steps),
        converged,
        _ratio(steps),
        grid,
        tuple(trace),
    )


def estimate_contraction(result: FixedPointResult) -> float | None:
    """sup of P(w_{i+1}, w_i, t) / P(w_i, w_{i-1}, t) over the steps and the grid.

    Returns None when no step distance is large enough to divide by.
    """
    return _ratio(result.step_distances)


def find_fixed_points(space: GThetaSpace, fn: SelfMap) -> tuple[Point, ...]:
    """Every x of an enumerable carrier with T(x) = x."""
    return tuple(x for x in space.carrier.points() if fn(x) == x)


def verify_step_contraction(
    space: GThetaSpace, fn: SelfMap, u: float, t_grid: Iterable[float] | None = None
) -> AxiomReport:
    """P(Tx, T²x, t) <= u P(x, Tx, t) for every enumerable x and grid t."""
    grid = tuple(t_grid) if t_grid is not None else sampling.default_t_grid()
    witness: Witness | None = None
    trials = 0
    for x in space.carrier.points():
        tx = fn(x)
        ttx = fn(tx)
        for t in grid:
            trials += 1
            lhs, rhs = eval_metric(space, tx, ttx, t), u * eval_metric(space, x, tx, t)
            if violates(lhs, rhs):
                witness = Witness((x,), {"t": t, "u": u}, lhs, rhs)
                break
        if witness is not None:
            break
    return AxiomReport(
        "step-contraction",
        Verdict.FAIL if witness else Verdict.PASS,
        witness,
        trials=trials,
        t_grid=grid,
    )



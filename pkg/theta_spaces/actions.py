from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import sampling
from .errors import ConfigurationError, DomainError, UnsolvableError
from .report import AxiomReport, Verdict, Witness, violates
from .shrinking import shrink

logger = logging.getLogger(__name__)

SOLVE_TOL = 1e-12
SOLVE_MAX_ITER = 200
BATCH_SIZE = 1000


@dataclass(frozen=True)
class BAction:
    """A binary operation on [0, ∞) used in place of addition.

    `known_violations` lists the axioms (B1-B4, continuity) that the catalog entry is
    known to fail; the verifier still checks them and reports the failure.
    """

    name: str
    fn: Callable[[float, float], float]
    description: str = ""
    known_violations: frozenset[str] = field(default_factory=frozenset[str])

    def __call__(self, a: float, b: float) -> float:
        return eval_action(self, a, b)


@dataclass(frozen=True)
class ControlPair:
    """A control function f on (0, ∞) together with its slack α.

    `at_zero` is the right limit f(0+), used whenever a distance vanishes. The
    `inverse` is optional and only speeds up `topology.open_ball_sufficiency`.
    """

    name: str
    fn: Callable[[float], float]
    alpha: float = 0.0
    at_zero: float = -math.inf
    inverse: Callable[[float], float] | None = None

    def f(self, t: float) -> float:
        if t < 0 or math.isnan(t):
            raise DomainError(
                "Control {} is undefined at {}.".format(self.name, t)
            )
        if t == 0:
            return self.at_zero
        return self.fn(t)

    def with_alpha(self, alpha: float) -> ControlPair:
        return ControlPair(self.name, self.fn, alpha, self.at_zero, self.inverse)


def eval_action(action: BAction, a: float, b: float) -> float:
    """Evaluate the action.

    Raises:
        DomainError: If an argument is negative or NaN.
    """
    if not (a >= 0 and b >= 0):
        raise DomainError(
            "Action {} is defined on [0, inf), got ({}, {}).".format(action.name, a, b)
        )
    return float(action.fn(a, b))


def solve_action(action: BAction, target: float, x: float) -> float:
    """Find ω ∈ [0, target] with action(x, ω) = target (axiom B3), by bisection.

    The tolerance is `SOLVE_TOL` on the action value, relative once the target
    exceeds one.

    Raises:
        DomainError: If x lies outside [0, target].
        UnsolvableError: If no ω in [0, target] reaches the target.
    """
    if not (0 <= x <= target) or math.isinf(target):
        raise DomainError(
            "solve_action needs 0 <= x <= target < inf, got x = {}, target = {}.".format(
                x, target
            )
        )
    tol = SOLVE_TOL * max(1.0, target)

    lo, hi = 0.0, float(target)
    g_lo = eval_action(action, x, lo) - target
    if abs(g_lo) <= tol:
        return lo
    g_hi = eval_action(action, x, hi) - target
    if abs(g_hi) <= tol:
        return hi
    if g_lo > 0 or g_hi < 0:
        raise UnsolvableError(action.name, target, x)

    for _ in range(SOLVE_MAX_ITER):
        mid = 0.5 * (lo + hi)
        g_mid = eval_action(action, x, mid) - target
        if abs(g_mid) <= tol:
            return mid
        if mid in (lo, hi):
            break
        if g_mid < 0:
            lo = mid
        else:
            hi = mid

    errors = {w: abs(eval_action(action, x, w) - target) for w in (lo, hi)}
    best = min(errors, key=errors.__getitem__)
    if errors[best] <= tol:
        return best
    raise UnsolvableError(action.name, target, x)


# Catalog ---------------------------------------------------------------------

_ACTIONS: dict[str, BAction] = {}
_CONTROLS: dict[str, ControlPair] = {}


def register_action(action: BAction) -> BAction:
    if action.name in _ACTIONS:
        raise ConfigurationError(
            "An action named {} is already registered.".format(action.name)
        )
    _ACTIONS[action.name] = action
    return action


def register_control(control: ControlPair) -> ControlPair:
    if control.name in _CONTROLS:
        raise ConfigurationError(
            "A control named {} is already registered.".format(control.name)
        )
    _CONTROLS[control.name] = control
    return control


def get_action(name: str) -> BAction:
    try:
        return _ACTIONS[name]
    except KeyError as err:
        raise ConfigurationError(
            "Unknown action {}, expected one of {}.".format(
                name, ", ".join(sorted(_ACTIONS))
            )
        ) from err


def get_control(name: str, alpha: float | None = None) -> ControlPair:
    try:
        control = _CONTROLS[name]
    except KeyError as err:
        raise ConfigurationError(
            "Unknown control {}, expected one of {}.".format(
                name, ", ".join(sorted(_CONTROLS))
            )
        ) from err
    return control if alpha is None else control.with_alpha(alpha)


def actions() -> list[BAction]:
    return list(_ACTIONS.values())


def controls() -> list[ControlPair]:
    return list(_CONTROLS.values())


def theta3(k: float) -> BAction:
    """k(a + b + ab) for k ∈ (0, 1]; for k < 1 it cannot reach ð from x = 0 within
    [0, ð], so B3 is declared as a known violation."""
    if not (0 < k <= 1):
        raise ConfigurationError("theta3 needs k in (0, 1], got {}.".format(k))
    return BAction(
        "theta3" if k == 0.5 else "theta3[k={}]".format(k),
        lambda a, b: k * (a + b + a * b),
        "k(a + b + ab), k = {}".format(k),
        frozenset({"B3"}) if k < 1 else frozenset(),
    )


PLUS = register_action(BAction("plus", lambda a, b: a + b, "a + b"))
THETA1 = register_action(BAction("theta1", lambda a, b: a + b + a * b, "a + b + ab"))
THETA2 = register_action(
    BAction(
        "theta2",
        lambda a, b: a * b / (1 + a * b) if a * b < math.inf else 1.0,
        "ab / (1 + ab)",
        frozenset({"B2", "B3"}),
    )
)
THETA3 = register_action(theta3(0.5))
THETA4 = register_action(BAction("theta4", lambda a, b: math.hypot(a, b), "sqrt(a² + b²)"))
ROOT_SUM = register_action(
    BAction("root_sum", lambda a, b: a + b + math.sqrt(a * b), "a + b + sqrt(ab)")
)
MAX = register_action(BAction("max", max, "max(a, b)", frozenset({"B2"})))
HALF_SUM = register_action(
    BAction("half_sum", lambda a, b: (a + b) / 2, "(a + b) / 2", frozenset({"B3"}))
)


def _neg_inv(t: float) -> float:
    return -1.0 / t


LN = register_control(ControlPair("ln", math.log, 0.0, -math.inf, math.exp))
NEG_INV = register_control(
    ControlPair("neg_inv", _neg_inv, 0.0, -math.inf, lambda y: -1.0 / y)
)
IDENTITY = register_control(ControlPair("identity", lambda t: t, 0.0, 0.0, lambda y: y))


# Verification ----------------------------------------------------------------

Args = tuple[float, ...]
Sides = tuple[float, float]

# Small corner values tried exhaustively before the random trials.
CORNERS = (0.0, 1.0, 2.0)


def _batches(trials: int) -> Iterator[tuple[int, int]]:
    batch = 0
    done = 0
    while done < trials:
        size = min(BATCH_SIZE, trials - done)
        yield batch, size
        batch += 1
        done += size


def _differs(lhs: float, rhs: float) -> bool:
    if math.isinf(lhs) or math.isinf(rhs):
        return lhs != rhs
    return abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs))


@dataclass(frozen=True)
class _Axiom:
    label: str
    arity: int
    relation: str
    sides: Callable[[BAction, Args], Sides | None]
    """lhs and rhs of the checked relation, None when the arguments are out of scope."""
    fails: Callable[[Sides], bool]


def _b1_sides(action: BAction, args: Args) -> Sides:
    a, b = args
    return action(a, b), action(b, a)


def _b2_sides(action: BAction, args: Args) -> Sides | None:
    x, w1, u, w2 = args
    if not ((x < u and w1 <= w2) or (x <= u and w1 < w2)):
        return None
    return action(x, w1), action(u, w2)


def _b3_sides(action: BAction, args: Args) -> Sides | None:
    """(action(x, target), target) when the top of [0, target] falls short, else
    (action(x, 0), target); None when x = frac * target is solvable."""
    a, b, frac = args
    target = action(a, b)
    if math.isinf(target) or not (0 <= frac <= 1):
        return None
    x = frac * target
    try:
        solve_action(action, target, x)
    except UnsolvableError:
        top = action(x, target)
        return (top, target) if top < target else (action(x, 0.0), target)
    return None


def _b4_sides(action: BAction, args: Args) -> Sides | None:
    (w,) = args
    return (action(w, 0.0), w) if w > 0 else None


def _continuity_sides(action: BAction, args: Args) -> Sides | None:
    a, b = args
    base = action(a, b)
    if math.isinf(base):
        return None
    delta = 1e-8 * max(1.0, a, b)
    return abs(action(a + delta, b + delta) - base), 1e-6 * max(1.0, abs(base))


AXIOMS = (
    _Axiom("B1", 2, "lhs == rhs", _b1_sides, lambda s: _differs(*s)),
    _Axiom("B2", 4, "lhs < rhs", _b2_sides, lambda s: not s[0] < s[1]),
    _Axiom("B3", 3, "no w in [0, target] reaches target", _b3_sides, lambda s: True),
    _Axiom("B4", 1, "lhs <= rhs", _b4_sides, lambda s: violates(*s)),
    _Axiom("continuity", 2, "lhs <= rhs", _continuity_sides, lambda s: s[0] > s[1]),
)


def _check(axiom: _Axiom, action: BAction, args: Args) -> Sides | None:
    sides = axiom.sides(action, args)
    if sides is None or not axiom.fails(sides):
        return None
    return sides


def _corner_args(axiom: _Axiom) -> Iterator[Args]:
    if axiom.label == "B3":
        for a, b in itertools.product(CORNERS, repeat=2):
            for frac in (0.0, 0.5, 1.0):
                yield (a, b, frac)
        return
    yield from itertools.product(CORNERS, repeat=axiom.arity)


def _sample_args(gen: np.random.Generator, axiom: _Axiom, size: int) -> list[Args]:
    values = sampling.nonneg_reals(gen, axiom.arity * size).reshape(size, axiom.arity)
    if axiom.label == "B2":
        return [
            (min(a, b), min(c, d), max(a, b), max(c, d)) for a, b, c, d in values
        ]
    if axiom.label == "B3":
        # the endpoints x = 0 and x = target are where B3 usually breaks
        fracs = gen.uniform(0.0, 1.0, size=size)
        fracs[::3] = 0.0
        fracs[1::7] = 1.0
        return [(float(a), float(b), float(f)) for (a, b, _), f in zip(values, fracs)]
    if axiom.label == "B4":
        values[values == 0.0] = 1.0
    return [tuple(float(v) for v in row) for row in values]


def _witness(axiom: _Axiom, action: BAction, args: Args, sides: Sides) -> Witness:
    if axiom.label == "B3":
        a, b, frac = args
        target = action(a, b)
        return Witness(
            (a, b), {"target": target, "x": frac * target}, sides[0], sides[1], axiom.relation
        )
    return Witness(args, {}, sides[0], sides[1], axiom.relation)


def verify_action(action: BAction, trials: int = 10_000, seed: int = 0) -> list[AxiomReport]:
    """Empirically check B1-B4 and continuity of an action.

    Each axiom is first tried on the corner grid {0, 1, 2}, then on `trials` samples
    drawn per batch from `seed`, so the reports are deterministic. A failing sample
    is shrunk into a readable witness; corner witnesses are reported as found.

    Returns:
        One report per axiom, in the order B1, B2, B3, B4, continuity.
    """
    if trials < 1:
        raise DomainError("verify_action needs at least one trial.")

    reports: list[AxiomReport] = []
    for index, axiom in enumerate(AXIOMS):
        witness: Witness | None = None

        for args in _corner_args(axiom):
            sides = _check(axiom, action, args)
            if sides is not None:
                witness = _witness(axiom, action, args, sides)
                break

        for batch, size in _batches(trials):
            if witness is not None:
                break
            logger.debug("action %s, %s batch %d", action.name, axiom.label, batch)
            gen = sampling.rng(seed + index, batch)
            for args in _sample_args(gen, axiom, size):
                if _check(axiom, action, args) is None:
                    continue
                shrunk = shrink(
                    args, lambda a: _check(axiom, action, a) is not None
                )
                sides = _check(axiom, action, shrunk)
                assert sides is not None
                witness = _witness(axiom, action, shrunk, sides)
                break

        if witness is not None:
            logger.info("action %s fails %s: %s", action.name, axiom.label, witness)
        reports.append(
            AxiomReport(
                axiom=axiom.label,
                verdict=Verdict.FAIL if witness is not None else Verdict.PASS,
                witness=witness,
                trials=trials,
                seed=seed,
                note=(
                    "declared known violation"
                    if axiom.label in action.known_violations
                    else ""
                ),
            )
        )
    return reports


def verify_control(pair: ControlPair, k_max: int = 1000, m: float = 100.0) -> list[AxiomReport]:
    """Check F1 (f non-decreasing), empirical F2 and α >= 0 for a control pair.

    F2 holds empirically when f(2^-k) < -m for some k <= k_max while f stays finite
    on [2^-10, 1], i.e. bounded below away from zero.
    """
    if k_max < 1:
        raise DomainError("verify_control needs k_max >= 1.")
    k_max = min(k_max, 1074)

    reports: list[AxiomReport] = []

    f1_witness: Witness | None = None
    gen = sampling.rng(k_max)
    for s, t in sampling.positive_reals(gen, 2000).reshape(1000, 2):
        lo, hi = float(min(s, t)), float(max(s, t))
        if violates(pair.f(lo), pair.f(hi)):
            f1_witness = Witness((lo, hi), {}, pair.f(lo), pair.f(hi))
            break
    reports.append(
        AxiomReport(
            "F1",
            Verdict.FAIL if f1_witness else Verdict.PASS,
            f1_witness,
            trials=1000,
            seed=k_max,
        )
    )

    f2_witness: Witness | None = None
    reached = next((k for k in range(1, k_max + 1) if pair.f(2.0**-k) < -m), None)
    if reached is None:
        f2_witness = Witness(
            (2.0**-k_max,), {"k": k_max, "m": m}, pair.f(2.0**-k_max), -m, "lhs < rhs"
        )
    else:
        for j in range(0, 11):
            value = pair.f(2.0**-j)
            if not math.isfinite(value):
                f2_witness = Witness((2.0**-j,), {"k": j}, value, -math.inf, "lhs > rhs")
                break
    reports.append(
        AxiomReport(
            "F2",
            Verdict.FAIL if f2_witness else Verdict.PASS,
            f2_witness,
            trials=k_max,
            note="" if reached is None else "f(2^-{}) < -{}".format(reached, m),
        )
    )

    alpha_witness = (
        None
        if pair.alpha >= 0
        else Witness((), {"alpha": pair.alpha}, 0.0, pair.alpha, "lhs <= rhs")
    )
    reports.append(
        AxiomReport(
            "alpha",
            Verdict.FAIL if alpha_witness else Verdict.PASS,
            alpha_witness,
            trials=1,
        )
    )
    return reports


def verify_binary_operation(
    action: BAction, trials: int = 2000, seed: int = 0
) -> list[AxiomReport]:
    """Check identity (z o 0 = z), monotonicity, commutativity and associativity
    of an action read as a parametric binary operation `o`."""

    def identity(args: Args) -> Sides:
        (z,) = args
        return action(z, 0.0), z

    def monotone(args: Args) -> Sides:
        z, beta, a = args
        return action(min(z, beta), a), action(max(z, beta), a)

    def commutative(args: Args) -> Sides:
        z, a = args
        return action(z, a), action(a, z)

    def associative(args: Args) -> Sides | None:
        z, beta, a = args
        left = action(z, action(beta, a))
        right = action(action(z, beta), a)
        return None if math.isinf(left) or math.isinf(right) else (left, right)

    checks = (
        _Axiom("o-identity", 1, "lhs == rhs", lambda _, a: identity(a), lambda s: _differs(*s)),
        _Axiom("o-monotone", 3, "lhs <= rhs", lambda _, a: monotone(a), lambda s: violates(*s)),
        _Axiom(
            "o-commutative", 2, "lhs == rhs", lambda _, a: commutative(a), lambda s: _differs(*s)
        ),
        _Axiom(
            "o-associative", 3, "lhs == rhs", lambda _, a: associative(a), lambda s: _differs(*s)
        ),
    )
    reports: list[AxiomReport] = []
    for index, check in enumerate(checks):
        gen = sampling.rng(seed + index)
        witness: Witness | None = None
        for args in _sample_args(gen, check, trials):
            if _check(check, action, args) is None:
                continue
            args = shrink(args, lambda a: _check(check, action, a) is not None)
            sides = _check(check, action, args)
            assert sides is not None
            witness = Witness(args, {}, sides[0], sides[1], check.relation)
            break
        reports.append(
            AxiomReport(
                check.label,
                Verdict.FAIL if witness else Verdict.PASS,
                witness,
                trials=trials,
                seed=seed,
            )
        )
    return reports


def resolve_action(value: str | BAction) -> BAction:
    return value if isinstance(value, BAction) else get_action(value)


def resolve_control(
    value: str | ControlPair | dict[str, Any], alpha: float | None = None
) -> ControlPair:
    """Resolve a control by name or by config block ({"name": ..., "alpha": ...});
    instances pass through."""
    if isinstance(value, ControlPair):
        return value if alpha is None else value.with_alpha(alpha)
    if isinstance(value, dict):
        name = value.get("name")
        if not isinstance(name, str):
            raise ConfigurationError("Control block needs a name.", "/control/name")
        block_alpha = value.get("alpha", alpha)
        if block_alpha is not None and not isinstance(block_alpha, (int, float)):
            raise ConfigurationError("Control alpha must be a number.", "/control/alpha")
        return get_control(name, None if block_alpha is None else float(block_alpha))
    return get_control(value, alpha)

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from scipy.special import gamma

from . import actions, fractional, suzuki, topology
from .axioms import (
    theta_triangle_sides,
    verify_gtheta,
    verify_parametric_triangle,
    verify_theta_parametric,
)
from .errors import ThetaSpacesError, UnsolvableError
from .metric_core import make_catalog_space, verify_b_metric
from .report import AxiomReport, Verdict, combine
from .sequences import check_convergence, check_sequential_continuity, make_sequence
from .suzuki import SuzukiConfig

logger = logging.getLogger(__name__)

TRIALS = 10_000

# (expected, observed, reproduced)
Outcome = tuple[str, str, bool]


@dataclass(frozen=True)
class ReproItem:
    id: str
    location: str
    expected: str
    observed: str
    verdict: Verdict

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "location": self.location,
            "expected": self.expected,
            "observed": self.observed,
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class ReproReport:
    items: tuple[ReproItem, ...]

    @property
    def verdict(self) -> Verdict:
        verdicts = {item.verdict for item in self.items}
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.INDETERMINATE in verdicts:
            return Verdict.INDETERMINATE
        return Verdict.PASS

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "items": [item.to_json() for item in self.items],
        }


@dataclass(frozen=True)
class _Check:
    id: str
    location: str
    run: Callable[[int, int], Outcome]


_CHECKS: list[_Check] = []


def _check(id: str, location: str):
    def register(fn: Callable[[int, int], Outcome]) -> Callable[[int, int], Outcome]:
        if any(c.id == id for c in _CHECKS):
            raise ValueError("Duplicate reproduction item {}.".format(id))
        _CHECKS.append(_Check(id, location, fn))
        return fn

    return register


def _failed(reports: list[AxiomReport]) -> set[str]:
    return {r.axiom for r in reports if r.verdict is Verdict.FAIL}


def _by_label(reports: list[AxiomReport], label: str) -> AxiomReport:
    return next(r for r in reports if r.axiom == label)


@_check("action-honesty", "B-action axioms and the catalog actions")
def _action_honesty(trials: int, seed: int) -> Outcome:
    mismatched: list[str] = []
    for action in actions.actions():
        failed = _failed(actions.verify_action(action, trials, seed))
        if failed != set(action.known_violations):
            mismatched.append("{} fails {}".format(action.name, sorted(failed)))

    # the two declared violations must replay through eval_action / solve_action
    b2 = _by_label(actions.verify_action(actions.MAX, trials, seed), "B2").witness
    b3 = _by_label(actions.verify_action(actions.HALF_SUM, trials, seed), "B3").witness
    replayed = False
    if b2 is not None and b3 is not None:
        x, w1, u, w2 = b2.points
        try:
            actions.solve_action(actions.HALF_SUM, b3.params["target"], b3.params["x"])
        except UnsolvableError:
            replayed = not actions.eval_action(actions.MAX, x, w1) < actions.eval_action(
                actions.MAX, u, w2
            )
    observed = "; ".join(mismatched) or "failures match the declared violations"
    if not replayed:
        observed += "; max/half-sum witnesses do not replay"
    return (
        "max fails B2, half-sum fails B3, every other action passes its undeclared axioms",
        observed,
        not mismatched and replayed,
    )


@_check("controls", "control family conditions")
def _controls(trials: int, seed: int) -> Outcome:
    verdicts = {
        name: _failed(actions.verify_control(actions.get_control(name)))
        for name in ("ln", "neg_inv", "identity")
    }
    observed = ", ".join(
        "{}: {}".format(name, sorted(failed) or "pass") for name, failed in verdicts.items()
    )
    ok = not verdicts["ln"] and not verdicts["neg_inv"] and verdicts["identity"] == {"F2"}
    return "ln and -1/t pass, the identity fails F2", observed, ok


@_check("step-separation", "step space: generalized but not θ-parametric")
def _step_separation(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("step_space")
    gtheta = combine(verify_gtheta(space, trials, seed))
    parametric = verify_parametric_triangle(space, trials, seed)
    theta = verify_theta_parametric(space, trials, seed)
    witness = theta.witness
    replay = (
        theta_triangle_sides(space, *witness.points, witness.params["t"])
        if witness is not None
        else None
    )
    observed = "gtheta {}, parametric {}, theta {} ({})".format(
        gtheta.value,
        parametric.verdict.value,
        theta.verdict.value,
        "no witness" if witness is None else "{} vs {}".format(witness.rhs, witness.lhs),
    )
    ok = (
        gtheta is Verdict.PASS
        and parametric.passed
        and witness is not None
        and witness.points == ((1, 0), (0, 0.5), (0.25, 0.125))
        and replay == (100.0, 50.0)
    )
    return "gtheta and parametric pass, theta fails with 50 < 100", observed, ok


@_check("exp-parametric", "e^p d(a, ξ) under plus is not a generalized parametric metric")
def _exp_parametric(trials: int, seed: int) -> Outcome:
    report = verify_parametric_triangle(make_catalog_space("exp_parametric_space"), trials, seed)
    return (
        "parametric triangle fails",
        "parametric triangle {}".format(report.verdict.value),
        report.verdict is Verdict.FAIL,
    )


@_check("exp-max-gtheta", "k e^(|x - β|/t) under max with (-1/t, 1/k)")
def _exp_max_gtheta(trials: int, seed: int) -> Outcome:
    reports = verify_gtheta(make_catalog_space("exp_max_space", {"k": 2.0}), trials, seed)
    verdict = combine(reports)
    return "all pass for k = 2", "gtheta {}".format(verdict.value), verdict is Verdict.PASS


@_check("exp-max-theta-triangle", "k e^(|x - β|/t) under max, same-parameter triangle")
def _exp_max_theta(trials: int, seed: int) -> Outcome:
    # Cataloged as a passing theta-parametric space, but the triangle fails at x, y, z = 0, 1, 2
    # and t = 1: P(0, 2, 1) = e² while max(P(0, 1, 1), P(1, 2, 1)) = e. The item expects fail.
    space = make_catalog_space("exp_max_space")
    report = verify_theta_parametric(space, trials, seed)
    lhs, rhs = theta_triangle_sides(space, 0.0, 2.0, 1.0, 1.0)
    return (
        "fails, P(0, 2, 1) = e² > max(e, e)",
        "theta {}, P(0, 2, 1) = {:.6g} vs {:.6g}".format(report.verdict.value, lhs, rhs),
        report.verdict is Verdict.FAIL and lhs > rhs,
    )


@_check("int-b-metric", "integers with the piecewise b-metric, K = 5")
def _int_b(trials: int, seed: int) -> Outcome:
    report = verify_b_metric(make_catalog_space("int_b_space"))
    observed = "b-metric {}".format(report.verdict.value)
    return "b-inequality holds with K = 5", observed, report.passed


@_check("open-ball-not-open", "seq_b_space (K = 8/3): the open ball ℬ(1, 2, 1)")
def _open_ball(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("seq_b_space", {"variant": "K83", "depth": 10_000})
    members = topology.ball_members(space, topology.Ball(1, 2.0, 1.0))
    report = topology.is_open_set(space, members)
    witness = report.witness
    escape = None if witness is None else witness.points[1]
    ok = (
        members == {0, 1}
        and witness is not None
        and witness.points[0] == 0
        and isinstance(escape, Fraction)
        and escape.numerator == 1
        and escape.denominator % 2 == 0
    )
    return (
        "members {0, 1}; not open, escaping at 1/(2N) from center 0",
        "members {}; open check {}, escape {}".format(
            sorted(str(m) for m in members), report.verdict.value, escape
        ),
        ok,
    )


@_check("closed-ball-not-closed", "seq_b_space (K = 4): the closed ball ℬ[1, 1/2, 1]")
def _closed_ball(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("seq_b_space", {"variant": "K4quarter", "depth": 10_000})
    ball = topology.Ball(1, 0.5, 1.0, topology.BallKind.CLOSED)
    members = topology.ball_members(space, ball)
    expected_members = set(space.carrier.points()) - {0}
    report = topology.is_closed_set(
        space, members, [make_sequence("half_reciprocal", 4999)], eps=1e-2
    )
    limit = None if report.witness is None else report.witness.points[0]
    return (
        "members = carrier without 0; not closed, 1/(2n) converges to 0",
        "{} members; closed check {}, limit {}".format(
            len(members), report.verdict.value, limit
        ),
        members == expected_members and report.verdict is Verdict.FAIL and limit == 0,
    )


@_check("sequential-continuity", "seq_b_space (K = 8/3): 1/(2n) against the point 1")
def _continuity(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("seq_b_space", {"variant": "K83", "depth": 10_000})
    seq = make_sequence("half_reciprocal", 100_000)
    report = check_sequential_continuity(space, seq, 0, 1)
    ok = report.verdict is Verdict.FAIL and all(
        math.isclose(report.tail_values[t], 4 / t, rel_tol=1e-9)
        and math.isclose(report.point_values[t], 1 / t, rel_tol=1e-9)
        for t in report.point_values
    )
    return (
        "tail 4/t against point value 1/t on t = 2^-5 .. 2^5",
        "continuity {} on {} grid values".format(
            report.verdict.value, len(report.point_values)
        ),
        ok,
    )


@_check("psi-branches", "ψ of Suzuki's theorem at its two breakpoints")
def _psi(trials: int, seed: int) -> Outcome:
    g, r = suzuki.GOLDEN_CONJUGATE, suzuki.INV_SQRT2
    first = (1.0, (1 - g) / g**2)
    second = ((1 - r) / r**2, 1 / (1 + r))
    ok = (
        abs(first[0] - first[1]) <= 1e-12
        and abs(second[0] - second[1]) <= 1e-12
        and abs(second[0] - (2 - math.sqrt(2))) <= 1e-12
        and suzuki.psi(g) == 1.0
    )
    return (
        "branches agree: 1 at (√5-1)/2, 2-√2 at 1/√2",
        "{:.15g} / {:.15g}, {:.15g} / {:.15g}".format(*first, *second),
        ok,
    )


@_check("suzuki-finite-plane", "four-point plane with T, u = 7/8")
def _suzuki_plane(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("finite_plane_space")
    fn = suzuki.get_map("plane_T")
    report = suzuki.verify_suzuki(space, fn, SuzukiConfig(7 / 8, seed=seed))
    runs = [suzuki.iterate_fixed_point(space, fn, w) for w in space.carrier.points()]
    reached = all(run.converged and run.fixed_point == (3, 3) for run in runs)
    most = max(run.iterations for run in runs)
    fixed = suzuki.find_fixed_points(space, fn)
    step = suzuki.verify_step_contraction(space, fn, 7 / 8)
    ok = report.passed and reached and most <= 3 and fixed == ((3, 3),) and step.passed
    return (
        "contraction passes, every start reaches (3, 3) in <= 3 steps, unique fixed point,"
        " one-step bound holds",
        "suzuki {}, at most {} steps, fixed points {}, step bound {}".format(
            report.verdict.value, most, list(fixed), step.verdict.value
        ),
        ok,
    )


@_check("suzuki-extended-premise", "the plane extended by (9, 7) with S")
def _suzuki_extended(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("finite_plane_extended")
    report = suzuki.premise_solvable(space, suzuki.get_map("plane_S"), (7, 9), (9, 7))
    return (
        "premise unsolvable for every r of the 100-point grid",
        "{} solutions out of {}".format(len(report.solutions), len(report.r_grid)),
        not report.solvable and len(report.r_grid) == 100,
    )


@_check("hausdorff", "finite plane: disjoint balls around distinct points")
def _hausdorff(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("finite_plane_space")
    points = space.carrier.points()
    separated = 0
    pairs = list(itertools.permutations(points, 2))
    for x, y in pairs:
        witness = topology.hausdorff_witness(space, x, y)
        if witness.first_members.isdisjoint(witness.second_members):
            separated += 1
    return (
        "every ordered pair separated",
        "{} of {} pairs separated".format(separated, len(pairs)),
        separated == len(pairs),
    )


@_check("rl-quadrature", "Riemann-Liouville integral of 1 and of s²")
def _quadrature(trials: int, seed: int) -> Outcome:
    eta = 1.5
    ones = fractional.GridFunction.from_callable(np.ones_like, 2000)
    value = fractional.rl_integral(ones, eta, 1.0)
    exact = 1 / float(gamma(eta + 1))
    relative = abs(value - exact) / exact

    exact_sq = 2 / float(gamma(eta + 3))
    squares = [
        fractional.GridFunction.from_callable(np.square, n) for n in (125, 250, 500, 1000)
    ]
    errors = [abs(fractional.rl_integral(fn, eta, 1.0) - exact_sq) for fn in squares]
    order = min(math.log2(a / b) for a, b in itertools.pairwise(errors))
    return (
        "relative error <= 1e-6 for the constant, order >= 2 for s²",
        "relative error {:.3g}, observed order {:.4f}".format(relative, order),
        relative <= 1e-6 and order >= 1.99,
    )


@_check("fde-solve", "Caputo problem with g = 0.2 f + τ, η = 1.5")
def _fde(trials: int, seed: int) -> Outcome:
    problem = fractional.FdeProblem.from_rhs(1.5, "linear:lambda=0.2,c=tau", n=2000)
    gate = fractional.verify_lipschitz(problem, seed=seed)
    rejected = fractional.verify_lipschitz(
        fractional.FdeProblem.from_rhs(1.5, "linear:lambda=0.5,c=tau"), seed=seed
    )
    result = fractional.solve_fde(problem)
    solution = result.fixed_point
    check = fractional.boundary_check(solution)
    ratio = result.observed_ratio
    ok = (
        gate.gate_passed
        and abs(gate.r - 0.6018) < 5e-4
        and not rejected.gate_passed
        and abs(rejected.r - 1.5045) < 5e-4
        and result.converged
        and result.residual <= 1e-10
        and ratio is not None
        and ratio <= 0.66
        and check.f0 == 0.0
        and check.gap <= 1e-3
    )
    return (
        "r = 0.6018, λ = 0.5 rejected (r = 1.5045), converges with residual <= 1e-10,"
        " ratio <= 0.66, f(0) = 0, boundary gap <= 1e-3",
        "r = {:.4f}, rejected r = {:.4f}, {} iterations, residual {:.3g}, ratio {},"
        " gap {:.3g}".format(
            gate.r,
            rejected.r,
            result.iterations,
            result.residual,
            "n/a" if ratio is None else "{:.4f}".format(ratio),
            check.gap,
        ),
        ok,
    )


@_check("convergence-plateau", "int_b_space: the alternating sequence 0, 1, 0, 1, ...")
def _alternating(trials: int, seed: int) -> Outcome:
    space = make_catalog_space("int_b_space")
    report = check_convergence(space, make_sequence("alternating", 1000), 0)
    return (
        "does not converge to 0",
        "convergence {}".format(report.verdict.value),
        report.verdict is Verdict.FAIL,
    )


def item_ids() -> list[str]:
    return [c.id for c in _CHECKS]


def run_all(seed: int = 0, trials: int = TRIALS) -> ReproReport:
    """Run every reproduction item.

    An item whose check raises is reported as a failure with the error as observation;
    the remaining items still run.
    """
    items: list[ReproItem] = []
    for check in _CHECKS:
        logger.info("reproducing %s", check.id)
        try:
            expected, observed, ok = check.run(trials, seed)
        except ThetaSpacesError as err:
            logger.error("Failed to reproduce %s: %s", check.id, err)
            items.append(
                ReproItem(check.id, check.location, "", "error: {}".format(err), Verdict.FAIL)
            )
            continue
        items.append(
            ReproItem(
                check.id,
                check.location,
                expected,
                observed,
                Verdict.PASS if ok else Verdict.FAIL,
            )
        )
    return ReproReport(tuple(items))

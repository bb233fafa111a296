import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from theta_spaces import actions
from theta_spaces.actions import (
    HALF_SUM,
    MAX,
    PLUS,
    THETA1,
    BAction,
    ControlPair,
    eval_action,
    solve_action,
    verify_action,
    verify_binary_operation,
    verify_control,
)
from theta_spaces.errors import ConfigurationError, DomainError, UnsolvableError
from theta_spaces.report import Verdict

nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)


def _verdicts(reports):
    return {r.axiom: r.verdict for r in reports}


def test_eval_action_examples():
    assert eval_action(THETA1, 2, 3) == 11
    assert eval_action(MAX, 3, 5) == 5
    for action in actions.actions():
        assert eval_action(action, 0, 0) == 0


def test_eval_action_rejects_negative_input():
    with pytest.raises(DomainError):
        eval_action(PLUS, -1.0, 2.0)
    with pytest.raises(DomainError):
        eval_action(PLUS, math.nan, 2.0)


@pytest.mark.parametrize(
    "action, target, x, expected",
    [(PLUS, 5.0, 2.0, 3.0), (THETA1, 5.0, 1.0, 2.0)],
)
def test_solve_action(action: BAction, target: float, x: float, expected: float):
    omega = solve_action(action, target, x)
    assert omega == pytest.approx(expected, abs=1e-9)
    assert abs(eval_action(action, x, omega) - target) <= actions.SOLVE_TOL * max(1, target)


def test_half_sum_cannot_reach_target():
    with pytest.raises(UnsolvableError) as info:
        solve_action(HALF_SUM, 2.0, 0.0)
    assert info.value.target == 2.0
    assert info.value.x == 0.0


def test_solve_action_checks_bracket():
    with pytest.raises(DomainError):
        solve_action(PLUS, 1.0, 2.0)


@given(nonneg, nonneg)
def test_catalog_actions_are_symmetric(a: float, b: float):
    for action in actions.actions():
        assert eval_action(action, a, b) == pytest.approx(eval_action(action, b, a), rel=1e-12)


@given(st.floats(min_value=0.0, max_value=1e3), st.floats(min_value=0.0, max_value=1.0))
def test_solve_then_eval_round_trips(target: float, share: float):
    x = share * target
    for action in (PLUS, THETA1, actions.THETA4, actions.ROOT_SUM):
        omega = solve_action(action, target, x)
        assert 0 <= omega <= target
        assert abs(eval_action(action, x, omega) - target) <= actions.SOLVE_TOL * max(1, target)


@given(st.floats(min_value=1e-6, max_value=1e6))
def test_b4_holds_for_every_catalog_action(w: float):
    for action in actions.actions():
        assert eval_action(action, w, 0.0) <= w


def test_plus_passes_every_axiom():
    assert set(_verdicts(verify_action(PLUS, trials=2000, seed=3)).values()) == {Verdict.PASS}


def test_max_fails_strict_monotonicity_with_replayable_witness():
    reports = {r.axiom: r for r in verify_action(MAX, trials=2000)}
    b2 = reports["B2"]
    assert b2.verdict is Verdict.FAIL
    assert b2.note == "declared known violation"
    x, w1, u, w2 = b2.witness.points
    assert (x < u and w1 <= w2) or (x <= u and w1 < w2)
    assert not eval_action(MAX, x, w1) < eval_action(MAX, u, w2)
    assert (b2.witness.lhs, b2.witness.rhs) == (eval_action(MAX, x, w1), eval_action(MAX, u, w2))
    assert reports["B3"].verdict is Verdict.PASS


def test_half_sum_fails_solvability_with_replayable_witness():
    reports = {r.axiom: r for r in verify_action(HALF_SUM, trials=2000)}
    b3 = reports["B3"]
    assert b3.verdict is Verdict.FAIL
    with pytest.raises(UnsolvableError):
        solve_action(HALF_SUM, b3.witness.params["target"], b3.witness.params["x"])


def test_undeclared_axioms_pass_for_the_catalog():
    for action in actions.actions():
        failed = {
            label
            for label, verdict in _verdicts(verify_action(action, trials=1000)).items()
            if verdict is Verdict.FAIL
        }
        assert failed == set(action.known_violations), action.name


def test_verify_action_is_deterministic():
    first = [r.to_json() for r in verify_action(MAX, trials=500, seed=11)]
    second = [r.to_json() for r in verify_action(MAX, trials=500, seed=11)]
    assert first == second


def test_verify_action_needs_a_trial():
    with pytest.raises(DomainError):
        verify_action(PLUS, trials=0)


def test_theta3_rejects_k_outside_unit_interval():
    with pytest.raises(ConfigurationError):
        actions.theta3(0.0)
    assert actions.theta3(1.0).known_violations == frozenset()


@pytest.mark.parametrize(
    "pair",
    [actions.LN, actions.NEG_INV.with_alpha(1 / 3)],
    ids=["ln", "neg_inv"],
)
def test_control_pairs_pass(pair: ControlPair):
    assert {r.verdict for r in verify_control(pair, k_max=1000)} == {Verdict.PASS}


def test_identity_control_fails_f2():
    verdicts = _verdicts(verify_control(actions.IDENTITY, k_max=1000))
    assert verdicts["F1"] is Verdict.PASS
    assert verdicts["F2"] is Verdict.FAIL


def test_negative_alpha_is_reported():
    verdicts = _verdicts(verify_control(actions.LN.with_alpha(-1.0)))
    assert verdicts["alpha"] is Verdict.FAIL


def test_control_at_zero_and_domain():
    assert actions.LN.f(0.0) == -math.inf
    with pytest.raises(DomainError):
        actions.LN.f(-1.0)


def test_half_sum_is_not_a_parametric_binary_operation():
    verdicts = _verdicts(verify_binary_operation(HALF_SUM))
    assert verdicts["o-identity"] is Verdict.FAIL
    assert verdicts["o-commutative"] is Verdict.PASS


def test_plus_is_a_parametric_binary_operation():
    assert {r.verdict for r in verify_binary_operation(PLUS)} == {Verdict.PASS}


def test_registry():
    assert actions.get_action("theta1") is THETA1
    with pytest.raises(ConfigurationError):
        actions.get_action("nope")
    with pytest.raises(ConfigurationError):
        actions.register_action(BAction("plus", lambda a, b: a + b))
    assert actions.get_control("ln", 0.5).alpha == 0.5


def test_resolve_control_from_block():
    pair = actions.resolve_control({"name": "neg_inv", "alpha": 0.25})
    assert pair.name == "neg_inv"
    assert pair.alpha == 0.25
    with pytest.raises(ConfigurationError):
        actions.resolve_control({"alpha": 1.0})

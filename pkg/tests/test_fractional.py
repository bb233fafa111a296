import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import gamma

from theta_spaces import suzuki
from theta_spaces.errors import ConfigurationError, DomainError, EvaluationError, PreconditionError
from theta_spaces.fractional import (
    FdeProblem,
    GridFunction,
    Rhs,
    apply_H,
    boundary_check,
    make_rhs,
    rl_integral,
    rl_integral_nodes,
    solve_fde,
    verify_lipschitz,
)
from theta_spaces.report import Verdict

ETA = 1.5


@pytest.fixture(scope="module")
def problem():
    return FdeProblem.from_rhs(ETA, "linear:lambda=0.2,c=tau", n=2000)


@pytest.fixture(scope="module")
def solved(problem):
    return solve_fde(problem)


class TestGridFunction:
    def test_validation(self):
        with pytest.raises(ValueError):
            GridFunction([1.0])
        with pytest.raises(ValueError):
            GridFunction([0.0, math.inf])
        with pytest.raises(ValueError):
            GridFunction.zeros(4).sup_distance(GridFunction.zeros(5))

    def test_values_are_frozen(self):
        fn = GridFunction.zeros(4)
        with pytest.raises(ValueError):
            fn.values[0] = 1.0

    def test_grid(self):
        fn = GridFunction.from_callable(np.square, 4)
        assert fn.n == 4
        assert fn.h == 0.25
        assert fn.values.tolist() == [0.0, 0.0625, 0.25, 0.5625, 1.0]
        assert fn.sup_distance(GridFunction.zeros(4)) == 1.0

    def test_constant_callable_is_broadcast(self):
        assert GridFunction.from_callable(lambda t: 2.0, 3).values.tolist() == [2.0] * 4

    def test_equality_and_hash(self):
        first = GridFunction.from_callable(np.sin, 10)
        second = GridFunction.from_callable(np.sin, 10)
        assert first == second
        assert hash(first) == hash(second)
        assert first != GridFunction.zeros(10)


class TestQuadrature:
    def test_constant_is_exact(self):
        ones = GridFunction.from_callable(np.ones_like, 2000)
        exact = 1 / gamma(ETA + 1)
        assert rl_integral(ones, ETA, 1.0) == pytest.approx(exact, rel=1e-6)
        nodes = rl_integral_nodes(ones, ETA)
        assert nodes[0] == 0.0
        assert nodes[-1] == pytest.approx(exact, rel=1e-9)

    @given(st.floats(min_value=1.01, max_value=2.0))
    def test_linear_functions_are_exact(self, eta):
        fn = GridFunction.from_callable(lambda t: t, 64)
        expected = fn.nodes ** (eta + 1) / gamma(eta + 2)
        assert np.allclose(rl_integral_nodes(fn, eta), expected, rtol=1e-9, atol=1e-12)

    def test_nodes_agree_with_pointwise_rule(self):
        fn = GridFunction.from_callable(np.cos, 50)
        nodes = rl_integral_nodes(fn, ETA)
        for j in (1, 7, 25, 50):
            assert rl_integral(fn, ETA, j / 50) == pytest.approx(nodes[j], rel=1e-9)

    def test_second_order_convergence(self):
        exact = 2 / gamma(ETA + 3)
        errors = [
            abs(rl_integral(GridFunction.from_callable(np.square, n), ETA, 1.0) - exact)
            for n in (125, 250, 500, 1000)
        ]
        for coarse, fine in zip(errors, errors[1:]):
            assert math.log2(coarse / fine) >= 1.99

    def test_between_nodes(self):
        ones = GridFunction.from_callable(np.ones_like, 100)
        value = rl_integral(ones, ETA, 0.333)
        assert value == pytest.approx(0.333**ETA / gamma(ETA + 1), rel=1e-9)

    def test_domain(self):
        ones = GridFunction.from_callable(np.ones_like, 10)
        assert rl_integral(ones, ETA, 0.0) == 0.0
        with pytest.raises(DomainError):
            rl_integral(ones, ETA, 1.5)
        with pytest.raises(DomainError):
            rl_integral(ones, 0.0, 0.5)
        with pytest.raises(DomainError):
            rl_integral_nodes(ones, -1.0)


class TestProblem:
    def test_contraction_bound(self, problem):
        assert problem.r == pytest.approx(0.6018, abs=5e-4)
        rejected = FdeProblem.from_rhs(ETA, "linear:lambda=0.5,c=tau")
        assert rejected.r == pytest.approx(1.5045, abs=5e-4)

    @pytest.mark.parametrize("eta", [1.0, 0.5, 2.5])
    def test_order_range(self, eta):
        with pytest.raises(DomainError):
            FdeProblem.from_rhs(eta, "zero")

    def test_make_rhs(self):
        linear = make_rhs("linear:lambda=-0.3,c=tau^2")
        assert linear.lipschitz == 0.3
        assert linear(np.array([0.5]), np.array([1.0])).tolist() == [-0.3 + 0.25]
        assert make_rhs("constant:c=2")(0.1, np.zeros(3)).tolist() == [2.0] * 3
        assert make_rhs("zero").lipschitz == 0.0

    @pytest.mark.parametrize(
        "text",
        ["cubic", "linear:lambda=x", "linear:lambda", "linear:mu=1", "linear:c=sin"],
    )
    def test_make_rhs_errors(self, text):
        with pytest.raises(ConfigurationError) as info:
            make_rhs(text)
        assert info.value.pointer == "/g"

    def test_lipschitz_gate(self, problem):
        gate = verify_lipschitz(problem)
        assert gate.gate_passed
        rejected = verify_lipschitz(FdeProblem.from_rhs(ETA, "linear:lambda=0.5,c=tau"))
        assert not rejected.gate_passed
        assert rejected.report.verdict is Verdict.FAIL
        assert "not a contraction" in rejected.report.note

    def test_gate_failure_carries_its_bound(self):
        rejected = verify_lipschitz(FdeProblem.from_rhs(ETA, "linear:lambda=0.5,c=tau"))
        witness = rejected.report.witness
        assert witness.points == ()
        assert witness.params == {"L": 0.5, "eta": ETA}
        assert witness.lhs == pytest.approx(1.5045, abs=5e-4)
        assert witness.rhs == 1.0
        assert rejected.report.to_json()["verdict"] == "fail"

    def test_non_finite_constant_fails_the_gate(self):
        problem = FdeProblem(ETA, make_rhs("zero"), lipschitz_L=math.inf)
        report = verify_lipschitz(problem).report
        assert report.verdict is Verdict.FAIL
        assert report.note == "r is not finite"

    def test_understated_lipschitz_constant(self):
        problem = FdeProblem(ETA, make_rhs("linear:lambda=0.2"), lipschitz_L=0.1)
        report = verify_lipschitz(problem)
        assert report.report.verdict is Verdict.FAIL
        assert report.report.witness.lhs > report.report.witness.rhs


class TestSolver:
    def test_apply_H_to_a_constant_rhs(self):
        problem = FdeProblem.from_rhs(ETA, "constant:c=1", n=2000)
        image = apply_H(problem, GridFunction.zeros(2000))
        t = image.nodes
        expected = t**ETA / gamma(ETA + 1) + 2 * t / ((ETA + 1) * gamma(ETA + 1))
        assert image.values[0] == 0.0
        assert np.max(np.abs(image.values - expected)) < 1e-6

    def test_apply_H_checks_the_grid(self, problem):
        with pytest.raises(DomainError):
            apply_H(problem, GridFunction.zeros(10))

    def test_apply_H_rejects_non_finite_rhs(self):
        bad = Rhs("bad", lambda tau, f: np.full(np.shape(f), np.inf), 0.0)
        problem = FdeProblem(ETA, bad, 0.0, n=10)
        with pytest.raises(EvaluationError) as info:
            apply_H(problem, GridFunction.zeros(10))
        assert info.value.node == 0

    def test_solution(self, problem, solved):
        assert solved.converged
        assert solved.residual <= 1e-10
        assert solved.observed_ratio is not None
        assert solved.observed_ratio <= 0.66
        check = boundary_check(solved.fixed_point)
        assert check.f0 == 0.0
        assert check.gap <= 1e-3
        assert apply_H(problem, solved.fixed_point).sup_distance(solved.fixed_point) < 1e-9

    def test_grid_refinement(self, solved):
        coarse = solve_fde(FdeProblem.from_rhs(ETA, "linear:lambda=0.2,c=tau", n=500))
        fine = solved.fixed_point.values[::4]
        assert np.max(np.abs(coarse.fixed_point.values - fine)) < 1e-4

    def test_gate_blocks_the_solver(self):
        with pytest.raises(PreconditionError):
            solve_fde(FdeProblem.from_rhs(ETA, "linear:lambda=0.5,c=tau"))

    def test_fde_map_is_registered(self, problem):
        fn = suzuki.get_map("fde_H", problem=problem)
        zero = GridFunction.zeros(problem.n)
        assert fn(zero) == apply_H(problem, zero)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from theta_spaces.errors import ConfigurationError, DomainError, PreconditionError
from theta_spaces.metric_core import make_catalog_space
from theta_spaces.report import Verdict
from theta_spaces.sequences import (
    SEQUENCE_T_GRID,
    check_cauchy,
    check_convergence,
    check_sequential_continuity,
    check_unique_limit,
    distance_trace,
    make_sequence,
)


@pytest.fixture(scope="module")
def k83():
    return make_catalog_space("seq_b_space", {"variant": "K83", "depth": 10_000})


@pytest.fixture(scope="module")
def int_b():
    return make_catalog_space("int_b_space")


@pytest.fixture(scope="module")
def plane():
    return make_catalog_space("finite_plane_space")


def test_catalog_sequences():
    assert make_sequence("half_reciprocal", 3).terms == (
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(1, 6),
        Fraction(1, 8),
    )
    assert make_sequence("alternating", 3, a=2, b=4).terms == (2, 4, 2, 4)
    assert make_sequence("eventually_constant", 4, switch=2).terms == (1, 1, 0, 0, 0)
    assert make_sequence("picard", 3).terms == ((7, 9), (7, 3), (3, 3), (3, 3))


def test_make_sequence_errors():
    with pytest.raises(ConfigurationError):
        make_sequence("fibonacci", 10)
    with pytest.raises(ConfigurationError):
        make_sequence("constant", 10, colour="red")
    with pytest.raises(DomainError):
        make_sequence("constant", 0)


def test_distance_trace(int_b):
    trace = distance_trace(int_b, make_sequence("alternating", 3), 0, [1.0, 2.0])
    assert trace.tolist() == [[0.0, 14.0, 0.0, 14.0], [0.0, 7.0, 0.0, 7.0]]


class TestConvergence:
    def test_reciprocals_converge_to_zero(self, k83):
        report = check_convergence(k83, make_sequence("half_reciprocal", 20_000), 0)
        assert report.verdict is Verdict.PASS
        assert report.t_grid == SEQUENCE_T_GRID
        assert all(n is not None for n in report.tail_index.values())
        assert all(v < 1e-3 for v in report.max_tail_distance.values())

    def test_reciprocals_do_not_converge_to_one(self, k83):
        report = check_convergence(k83, make_sequence("half_reciprocal", 1000), 1)
        assert report.verdict is Verdict.FAIL
        for t, value in report.max_tail_distance.items():
            assert value == pytest.approx(4 / t)

    def test_short_horizon_is_indeterminate(self, k83):
        report = check_convergence(k83, make_sequence("half_reciprocal", 100), 0)
        assert report.verdict is Verdict.INDETERMINATE

    def test_constant_sequence(self, int_b):
        report = check_convergence(int_b, make_sequence("constant", 50, value=4), 4)
        assert report.verdict is Verdict.PASS
        assert set(report.tail_index.values()) == {0}

    def test_alternating_does_not_converge(self, int_b):
        report = check_convergence(int_b, make_sequence("alternating", 1000), 0)
        assert report.verdict is Verdict.FAIL

    def test_eps_must_be_positive(self, int_b):
        with pytest.raises(DomainError):
            check_convergence(int_b, make_sequence("constant", 5), 0, eps=0.0)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=3))
    def test_longer_horizons_keep_a_pass(self, extra):
        space = make_catalog_space("int_b_space")
        seq = make_sequence("eventually_constant", 40 * (1 + extra), switch=5)
        assert check_convergence(space, seq, 0).verdict is Verdict.PASS


class TestCauchy:
    def test_reciprocals_are_cauchy(self, k83):
        report = check_cauchy(k83, make_sequence("half_reciprocal", 20_000))
        assert report.verdict is Verdict.PASS

    def test_constant_is_cauchy(self, int_b):
        assert check_cauchy(int_b, make_sequence("constant", 100)).verdict is Verdict.PASS

    def test_alternating_is_not_cauchy(self, int_b):
        report = check_cauchy(int_b, make_sequence("alternating", 1000))
        assert report.verdict is Verdict.FAIL
        for t, value in report.max_pair_distance.items():
            assert value == pytest.approx(14 / t)


class TestUniqueLimit:
    def test_reciprocals(self, k83):
        report = check_unique_limit(k83, make_sequence("half_reciprocal", 20_000), 0, 1)
        assert report.consistent
        assert report.first.verdict is Verdict.PASS
        assert report.second.verdict is Verdict.FAIL

    def test_picard_iterates(self, plane):
        report = check_unique_limit(plane, make_sequence("picard", 50), (3, 3), (7, 3))
        assert report.consistent
        assert report.first.verdict is Verdict.PASS

    def test_limits_must_differ(self, k83):
        with pytest.raises(PreconditionError):
            check_unique_limit(k83, make_sequence("half_reciprocal", 10), 0, 0)


class TestSequentialContinuity:
    def test_reciprocals_against_one(self, k83):
        report = check_sequential_continuity(
            k83, make_sequence("half_reciprocal", 100_000), 0, 1
        )
        assert report.verdict is Verdict.FAIL
        assert report.continuous is False
        for t in SEQUENCE_T_GRID:
            assert report.tail_values[t] == pytest.approx(4 / t, rel=1e-9)
            assert report.point_values[t] == pytest.approx(1 / t, rel=1e-9)

    def test_point_at_the_limit(self, k83):
        report = check_sequential_continuity(
            k83, make_sequence("half_reciprocal", 100_000), 0, 0, t_grid=[1.0]
        )
        assert report.continuous is True

    def test_eventually_constant(self, int_b):
        seq = make_sequence("eventually_constant", 100, value=2, other=7)
        report = check_sequential_continuity(int_b, seq, 2, 5)
        assert report.verdict is Verdict.PASS
        assert report.tail_values == report.point_values

    def test_not_converging_is_indeterminate(self, int_b):
        report = check_sequential_continuity(int_b, make_sequence("alternating", 100), 0, 1)
        assert report.verdict is Verdict.INDETERMINATE
        assert report.continuous is None

import math
from fractions import Fraction

import pytest

from theta_spaces import topology
from theta_spaces.actions import ControlPair
from theta_spaces.errors import PreconditionError, UnsupportedError
from theta_spaces.metric_core import make_catalog_space
from theta_spaces.report import Verdict
from theta_spaces.sequences import make_sequence
from theta_spaces.topology import Ball, BallKind

PLANE = ((3, 3), (7, 3), (3, 7), (7, 9))


@pytest.fixture(scope="module")
def k83():
    return make_catalog_space("seq_b_space", {"variant": "K83", "depth": 10_000})


@pytest.fixture(scope="module")
def k4quarter():
    return make_catalog_space("seq_b_space", {"variant": "K4quarter", "depth": 10_000})


@pytest.fixture(scope="module")
def plane():
    return make_catalog_space("finite_plane_space")


def test_ball_needs_positive_radius_and_t():
    with pytest.raises(ValueError):
        Ball(0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Ball(0, 1.0, -1.0)


def test_open_and_closed_membership(plane):
    assert topology.ball_members(plane, Ball((3, 3), 16.0, 1.0)) == {(3, 3)}
    closed = Ball((3, 3), 16.0, 1.0, BallKind.CLOSED)
    assert topology.ball_members(plane, closed) == {(3, 3), (7, 3), (3, 7)}


def test_ball_members_need_an_enumerable_carrier():
    with pytest.raises(UnsupportedError):
        topology.ball_members(make_catalog_space("step_space"), Ball((0, 0), 1.0, 1.0))


class TestOpenSets:
    def test_open_ball_that_is_not_open(self, k83):
        members = topology.ball_members(k83, Ball(Fraction(1), 2.0, 1.0))
        assert members == {0, 1}
        report = topology.is_open_set(k83, members)
        assert report.verdict is Verdict.FAIL
        center, escape = report.witness.points
        assert center == 0
        assert escape == Fraction(1, 10_000)
        assert escape not in members
        assert report.escapes[0][1] == escape

    @pytest.mark.parametrize("depth", [100, 1000])
    def test_open_ball_is_refuted_at_shallow_depths(self, depth):
        space = make_catalog_space("seq_b_space", {"variant": "K83", "depth": depth})
        members = topology.ball_members(space, Ball(Fraction(1), 2.0, 1.0))
        assert members == {0, 1}
        report = topology.is_open_set(space, members)
        assert report.verdict is Verdict.FAIL
        center, escape = report.witness.points
        assert center == 0
        assert escape == Fraction(1, depth)
        assert report.witness.params["depth"] == depth // 2
        assert report.witness.lhs < report.witness.rhs

    def test_isolated_point_of_a_truncated_carrier_is_open(self):
        space = make_catalog_space("seq_b_space", {"variant": "K83", "depth": 1000})
        assert topology.is_open_set(space, {Fraction(1, 2)}).passed

    def test_singletons_of_a_finite_space_are_open(self, plane):
        assert topology.is_open_set(plane, {(3, 3)}).passed

    def test_whole_carrier_is_open(self, plane):
        report = topology.is_open_set(plane, PLANE)
        assert report.passed
        assert report.note == "the set is the whole carrier"


class TestClosedSets:
    def test_closed_ball_that_is_not_closed(self, k4quarter):
        ball = Ball(Fraction(1), 0.5, 1.0, BallKind.CLOSED)
        members = topology.ball_members(k4quarter, ball)
        assert members == set(k4quarter.carrier.points()) - {0}
        report = topology.is_closed_set(
            k4quarter, members, [make_sequence("half_reciprocal", 4999)], eps=1e-2
        )
        assert report.verdict is Verdict.FAIL
        assert report.witness.points == (0,)

    def test_sequence_must_stay_in_the_set(self, k4quarter):
        with pytest.raises(PreconditionError):
            topology.is_closed_set(
                k4quarter, {Fraction(1, 2)}, [make_sequence("half_reciprocal", 10)]
            )

    def test_finite_sets_pass(self, plane):
        constant = make_sequence("constant", 20, value=[3, 3])
        assert topology.is_closed_set(plane, {(3, 3)}, [constant]).passed


class TestHausdorff:
    def test_every_pair_of_the_plane_separates(self, plane):
        for x in PLANE:
            for y in PLANE:
                if x == y:
                    continue
                witness = topology.hausdorff_witness(plane, x, y)
                assert witness.first_members.isdisjoint(witness.second_members)
                assert x in witness.first_members
                assert y in witness.second_members

    def test_first_split_suffices_on_the_plane(self, plane):
        witness = topology.hausdorff_witness(plane, (3, 3), (7, 9))
        assert witness.k == 1
        assert witness.t0 == 2.0**-10
        assert witness.first.t == 2.0**-11

    def test_integers(self):
        space = make_catalog_space("int_b_space", {"depth": 10})
        witness = topology.hausdorff_witness(space, 0, 1)
        assert witness.first_members.isdisjoint(witness.second_members)

    def test_equal_points(self, plane):
        with pytest.raises(PreconditionError):
            topology.hausdorff_witness(plane, (3, 3), (3, 3))


@pytest.mark.parametrize("r, expected", [(17.0, True), (16.0, False)])
def test_closure_meets_ball(plane, r, expected):
    assert topology.closure_meets_ball(plane, [(7, 3)], (3, 3), r, 1.0) is expected


def test_closure_points(plane):
    assert topology.closure_points(plane, [(3, 3)]) == {(3, 3)}
    assert topology.closure_points(plane, []) == frozenset()


class TestOpenBallSufficiency:
    def test_ln_with_slack(self):
        space = make_catalog_space("int_b_space")
        condition = topology.open_ball_sufficiency(space, Ball(0, 2.0, 1.0))
        assert condition.h_value == pytest.approx(2.0 / 5)
        assert condition.verdict is Verdict.FAIL
        assert condition.condition_holds is False

    def test_ln_without_slack(self):
        space = make_catalog_space("step_space")
        condition = topology.open_ball_sufficiency(space, Ball((0, 0), 3.0, 1.0))
        assert condition.h_value == pytest.approx(3.0)
        assert condition.verdict is Verdict.FAIL

    def test_neg_inv(self):
        space = make_catalog_space("exp_max_space", {"k": 2.0})
        condition = topology.open_ball_sufficiency(space, Ball(0.0, 4.0, 1.0))
        assert condition.h_value == pytest.approx(1 / (1 / 4.0 + 1 / 2.0))

    def test_bisection_without_an_inverse(self, plane):
        control = ControlPair("log", math.log, math.log(4))
        space = plane.with_pair(control=control)
        condition = topology.open_ball_sufficiency(space, Ball((3, 3), 1.0, 1.0))
        assert condition.h_value == pytest.approx(0.25, rel=1e-9)

    def test_closed_balls_are_rejected(self, plane):
        with pytest.raises(PreconditionError):
            topology.open_ball_sufficiency(plane, Ball((3, 3), 1.0, 1.0, BallKind.CLOSED))


class TestClosedBallSufficiency:
    def test_reciprocals_break_the_condition(self, k4quarter):
        ball = Ball(Fraction(1), 0.5, 1.0, BallKind.CLOSED)
        report = topology.closed_ball_sufficiency(
            k4quarter, ball, [(make_sequence("half_reciprocal", 1000), Fraction(0))]
        )
        assert report.verdict is Verdict.FAIL
        assert (report.witness.lhs, report.witness.rhs) == (1.0, 0.25)

    def test_condition_holds_at_the_limit(self, k83):
        ball = Ball(Fraction(0), 0.5, 1.0, BallKind.CLOSED)
        report = topology.closed_ball_sufficiency(
            k83, ball, [(make_sequence("half_reciprocal", 1000), Fraction(0))]
        )
        assert report.passed


def test_finite_compactness(plane):
    assert topology.finite_compactness_sanity(plane).passed
    with pytest.raises(UnsupportedError):
        topology.finite_compactness_sanity(make_catalog_space("int_b_space"))

import math
from fractions import Fraction

import pytest

from theta_spaces import metric_core
from theta_spaces.errors import ConfigurationError, DomainError, UnsupportedError
from theta_spaces.metric_core import (
    distance_table,
    eval_metric,
    induce_parametric,
    induced_space,
    make_catalog_space,
    restrict,
    space_from_config,
    verify_b_metric,
    verify_t_monotone,
)
from theta_spaces.report import Verdict


def test_list_catalog_rows():
    rows = {row["name"]: row for row in metric_core.list_catalog()}
    assert rows["int_b_space"]["action"] == "plus"
    assert rows["int_b_space"]["control"]["alpha"] == pytest.approx(math.log(5))
    assert rows["int_b_space"]["parameters"] == {"depth": 20}
    assert rows["seq_b_space"]["parameters"] == {"variant": "K83", "depth": 10_000}
    assert rows["exp_parametric_space"]["certified"] is False
    assert rows["finite_plane_space"]["b_constant"] == 2


def test_make_catalog_space_errors():
    with pytest.raises(ConfigurationError) as info:
        make_catalog_space("nope")
    assert info.value.pointer == "/space"
    with pytest.raises(ConfigurationError):
        make_catalog_space("finite_plane_extended", {"depth": 3})


def test_space_from_config_replaces_the_pair():
    space = space_from_config(
        {"space": "int_b_space", "depth": 5, "action": "theta1", "control": "neg_inv"}
    )
    assert space.params["depth"] == 5
    assert space.action.name == "theta1"
    assert space.control.name == "neg_inv"
    with pytest.raises(ConfigurationError):
        space_from_config({"depth": 5})


def test_eval_metric_rejects_bad_arguments():
    space = make_catalog_space("int_b_space")
    assert eval_metric(space, 0, 1, 2.0) == 7.0
    with pytest.raises(DomainError):
        eval_metric(space, 0, 1, -1.0)
    with pytest.raises(DomainError):
        eval_metric(space, 0, 0.5, 1.0)


def test_induced_metric_never_exceeds_the_base():
    space = make_catalog_space("piecewise_triple")
    for x in space.carrier.points():
        for y in space.carrier.points():
            for t in (0.5, 1.0, 2.0, 4.0, 8.0):
                assert induce_parametric(space, x, y, t) <= eval_metric(space, x, y, t)


def test_induced_metric_is_nonincreasing_on_the_triple():
    induced = induced_space(make_catalog_space("piecewise_triple"))
    assert not induced.certified
    grid = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
    for x in induced.carrier.points():
        for y in induced.carrier.points():
            values = [induced.distance(x, y, t) for t in grid]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_induced_metric_needs_a_finite_carrier():
    with pytest.raises(UnsupportedError):
        induce_parametric(make_catalog_space("step_space"), (0, 0), (1, 0), 1.0)


def test_restrict():
    space = make_catalog_space("step_space")
    small = restrict(space, [(0, 0), (1, 0), (0, 0)])
    assert small.carrier.points() == ((0, 0), (1, 0))
    assert small.probes == ((1, 0),)
    with pytest.raises(DomainError):
        restrict(space, [])
    with pytest.raises(DomainError):
        restrict(make_catalog_space("int_b_space"), [0.5])


@pytest.mark.parametrize(
    "name, params",
    [
        ("int_b_space", {}),
        ("finite_plane_space", {}),
        ("seq_b_space", {"depth": 40}),
        ("seq_b_space", {"variant": "K4quarter", "depth": 40}),
    ],
)
def test_catalog_b_metrics_hold_their_constant(name, params):
    report = verify_b_metric(make_catalog_space(name, params))
    assert report.verdict is Verdict.PASS


def test_b_metric_constant_too_small():
    report = verify_b_metric(make_catalog_space("int_b_space"), k=1.0)
    assert report.verdict is Verdict.FAIL
    x, z, y = report.witness.points
    assert report.witness.lhs > report.witness.rhs
    assert report.witness.rhs == pytest.approx(
        1.0 * (abs(x - z) * 5 + 9 if (x - z) % 2 else abs(x - z))
        + 1.0 * (abs(z - y) * 5 + 9 if (z - y) % 2 else abs(z - y))
    )


def test_seq_b_constant_is_tight():
    space = make_catalog_space("seq_b_space", {"depth": 40})
    report = verify_b_metric(
        space, k=2.5, points=[Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3)]
    )
    assert report.verdict is Verdict.FAIL


def test_b_metric_needs_a_b_metric():
    with pytest.raises(UnsupportedError):
        verify_b_metric(make_catalog_space("step_space"))


def test_t_monotone_claims():
    assert verify_t_monotone(make_catalog_space("int_b_space")).verdict is Verdict.PASS
    assert verify_t_monotone(make_catalog_space("step_space")).verdict is Verdict.PASS
    report = verify_t_monotone(make_catalog_space("piecewise_space"))
    assert report.verdict is Verdict.INDETERMINATE


def test_distance_table():
    space = make_catalog_space("int_b_space")
    table = distance_table(space, [0, 1, 2], 0, [1.0, 2.0])
    assert table.tolist() == [[0.0, 14.0, 2.0], [0.0, 7.0, 1.0]]
    with pytest.raises(DomainError):
        distance_table(space, [0.5], 0, [1.0])
    step = make_catalog_space("step_space")
    assert distance_table(step, [(1, 0)], (0, 0), [0.5, 3.0]).tolist() == [[100.0], [0.0]]

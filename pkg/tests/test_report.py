import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from theta_spaces import sampling
from theta_spaces.report import AxiomReport, Verdict, Witness, combine, to_jsonable, violates
from theta_spaces.shrinking import candidates, positive_candidates, shrink


class TestReport:
    def test_failure_needs_a_witness(self):
        with pytest.raises(ValueError):
            AxiomReport("B1", Verdict.FAIL)

    def test_combine(self):
        witness = Witness((0.0,), {}, 1.0, 0.0)
        passed = AxiomReport("a", Verdict.PASS)
        unknown = AxiomReport("b", Verdict.INDETERMINATE)
        failed = AxiomReport("c", Verdict.FAIL, witness)
        assert combine([passed]) is Verdict.PASS
        assert combine([passed, unknown]) is Verdict.INDETERMINATE
        assert combine([unknown, failed, passed]) is Verdict.FAIL
        assert not Verdict.FAIL
        assert Verdict.PASS

    def test_violates(self):
        assert not violates(1.0, 1.0)
        assert not violates(1.0 + 1e-12, 1.0)
        assert violates(1.1, 1.0)
        assert not violates(-math.inf, 0.0)
        assert violates(math.inf, 1e300)
        assert violates(math.nan, 1.0)

    def test_report_json_is_serializable(self):
        witness = Witness(((3, 3), Fraction(1, 2)), {"t": 1.0}, math.inf, 2.0)
        data = AxiomReport("Ptheta2", Verdict.FAIL, witness, trials=3, seed=1).to_json()
        assert json.loads(json.dumps(data))["witness"] == {
            "points": [[3, 3], "1/2"],
            "lhs": "inf",
            "rhs": 2.0,
            "relation": "lhs <= rhs",
            "t": 1.0,
        }
        assert data["verdict"] == "fail"

    def test_to_jsonable(self):
        assert to_jsonable(np.float64(0.5)) == 0.5
        assert to_jsonable(np.int64(3)) == 3
        assert to_jsonable({1: {2, 1}}) == {"1": [1, 2]}
        assert to_jsonable(Verdict.PASS) == "pass"
        assert to_jsonable(math.nan) == "nan"


class TestSampling:
    def test_default_t_grid(self):
        grid = sampling.default_t_grid()
        assert len(grid) == 21
        assert grid[0] == 2.0**-10
        assert grid[-1] == 1024.0
        assert 3.0 in sampling.default_t_grid([3.0, -1.0])

    def test_power_grid(self):
        assert sampling.power_grid(-1, 1, 3.0) == (1.5, 3.0, 6.0)

    def test_generators_are_reproducible(self):
        first = sampling.nonneg_reals(sampling.rng(7, 2), 100)
        second = sampling.nonneg_reals(sampling.rng(7, 2), 100)
        other = sampling.nonneg_reals(sampling.rng(7, 3), 100)
        assert np.array_equal(first, second)
        assert not np.array_equal(first, other)

    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=200))
    def test_positive_reals_are_positive(self, seed: int, count: int):
        values = sampling.positive_reals(sampling.rng(seed), count)
        assert values.shape == (count,)
        assert (values > 0).all()
        assert (values <= 1e6).all()


class TestShrinking:
    def test_candidates(self):
        assert list(candidates(3.7)) == [0.0, 1.0, 4.0, 1.85]
        assert list(candidates(6)) == [0, 3]
        assert list(candidates(Fraction(1, 3))) == []
        assert (0.0, 2.0) in list(candidates((5.0, 2.0)))

    def test_positive_candidates_stop_at_the_floor(self):
        assert list(positive_candidates(1.0)) == [0.5]
        assert list(positive_candidates(1 / 64)) == []

    @given(st.floats(min_value=2.0, max_value=1e6), st.floats(min_value=0.0, max_value=1e6))
    def test_shrink_keeps_failing(self, a: float, b: float):
        def fails(args: tuple[float, float]) -> bool:
            return args[0] > 1.5

        shrunk = shrink((a, b), fails)
        assert fails(shrunk)
        assert shrunk[1] == 0.0

    def test_shrink_reaches_a_small_witness(self):
        assert shrink((13.0, 7.0), lambda args: args[0] > args[1]) == (1.0, 0.0)

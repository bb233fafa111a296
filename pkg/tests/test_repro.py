import pytest

from theta_spaces import repro
from theta_spaces.report import Verdict


@pytest.fixture(scope="module")
def report():
    return repro.run_all(seed=0, trials=2000)


def test_item_ids_are_unique():
    ids = repro.item_ids()
    assert len(ids) == len(set(ids))
    assert {"step-separation", "fde-solve", "convergence-plateau"} <= set(ids)


def test_every_item_reproduces(report):
    failed = [(i.id, i.observed) for i in report.items if i.verdict is not Verdict.PASS]
    assert failed == []
    assert report.verdict is Verdict.PASS
    assert [item.id for item in report.items] == repro.item_ids()


def test_report_json(report):
    data = report.to_json()
    assert data["verdict"] == "pass"
    keys = {"id", "location", "expected", "observed", "verdict"}
    assert all(set(item) == keys for item in data["items"])


def test_a_raising_item_is_a_failure(monkeypatch):
    def broken(trials, seed):
        raise repro.UnsolvableError("plus", 1.0, 2.0)

    monkeypatch.setattr(repro, "_CHECKS", [repro._Check("broken", "nowhere", broken)])
    result = repro.run_all(trials=10)
    assert result.verdict is Verdict.FAIL
    assert result.items[0].observed.startswith("error:")

from __future__ import annotations

import enum
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"

    def __bool__(self) -> bool:
        return self is Verdict.PASS


@dataclass(frozen=True)
class Witness:
    """A counterexample to an axiom.

    `points` and `params` are exactly the arguments that, fed back through the
    distance and the action, reproduce `lhs` and `rhs`.
    """

    points: tuple[Any, ...]
    params: Mapping[str, float] = field(default_factory=dict)
    lhs: float = math.nan
    rhs: float = math.nan
    relation: str = "lhs <= rhs"

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "points": [to_jsonable(p) for p in self.points],
            "lhs": to_jsonable(self.lhs),
            "rhs": to_jsonable(self.rhs),
            "relation": self.relation,
        }
        for key, value in self.params.items():
            data[key] = to_jsonable(value)
        return data


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    verdict: Verdict
    witness: Witness | None = None
    trials: int = 0
    seed: int | None = None
    t_grid: tuple[float, ...] = ()
    vacuous: int = 0
    """Samples for which the axiom's premise did not hold."""
    note: str = ""

    def __post_init__(self):
        if self.verdict is Verdict.FAIL and self.witness is None:
            raise ValueError(
                "Report for {} is a failure without a witness.".format(self.axiom)
            )

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict[str, Any]:
        return {
            "axiom": self.axiom,
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else self.witness.to_json(),
            "trials": self.trials,
            "seed": self.seed,
            "t_grid": list(self.t_grid),
            "vacuous": self.vacuous,
            "note": self.note,
        }


def combine(reports: Sequence[AxiomReport]) -> Verdict:
    """Overall verdict of a list of reports: any failure wins over indeterminate."""
    verdicts = {r.verdict for r in reports}
    if Verdict.FAIL in verdicts:
        return Verdict.FAIL
    if Verdict.INDETERMINATE in verdicts:
        return Verdict.INDETERMINATE
    return Verdict.PASS


def violates(lhs: float, rhs: float, slack: float = 1e-9) -> bool:
    """True if `lhs <= rhs` is violated beyond the floating point slack.

    Infinite values are compared exactly (f(0) = -inf for the catalog controls).
    """
    if math.isnan(lhs) or math.isnan(rhs):
        return True
    if math.isinf(lhs) or math.isinf(rhs):
        return lhs > rhs
    return lhs > rhs + slack * max(1.0, abs(rhs))


def to_jsonable(value: Any) -> Any:
    """Convert points, fractions and numpy values to JSON compatible values."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, enum.Enum):
        return value.value
    to_json = getattr(value, "to_json", None)
    if callable(to_json):
        return to_json()
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}  # type: ignore
    if isinstance(value, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(value, key=repr)]  # type: ignore
    if isinstance(value, (tuple, list)):
        return [to_jsonable(v) for v in value]  # type: ignore
    item = getattr(value, "item", None)
    if callable(item):
        return to_jsonable(item())
    return str(value)

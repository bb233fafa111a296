from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from numbers import Integral, Real
from typing import Any

from .errors import ThetaSpacesError

logger = logging.getLogger(__name__)

# Halving stops here, smaller values are not easier to read.
HALVING_FLOOR = 1 / 64


def candidates(value: Any) -> Iterator[Any]:
    """Simpler values to try in place of `value`, simplest first.

    Reals go to 0, 1, their rounding and their half; integers to 0 and their half;
    pairs shrink one coordinate at a time. Other values (fractions, grid functions)
    are left alone.
    """
    if isinstance(value, bool):
        return
    if isinstance(value, Integral):
        seen = {int(value)}
        for c in (0, int(value) // 2):
            if c not in seen:
                seen.add(c)
                yield c
        return
    if isinstance(value, float):
        seen = {value}
        for c in (0.0, 1.0, float(round(value)), value / 2):
            if c in seen:
                continue
            seen.add(c)
            # 1 is never halved, 0.5 would shrink back to 1
            if c == value / 2 and (abs(c) < HALVING_FLOOR or abs(value) == 1.0):
                continue
            yield c
        return
    if isinstance(value, tuple) and all(isinstance(c, Real) for c in value):  # type: ignore
        for i, coordinate in enumerate(value):  # type: ignore
            for c in candidates(coordinate):
                yield value[:i] + (c,) + value[i + 1 :]  # type: ignore


def positive_candidates(value: float) -> Iterator[float]:
    """Halvings of a parameter that must stay positive."""
    if value / 2 >= HALVING_FLOOR:
        yield value / 2


def shrink(
    args: tuple[Any, ...],
    fails: Callable[[tuple[Any, ...]], bool],
    proposals: Callable[[int, Any], Iterator[Any]] | None = None,
    max_rounds: int = 64,
) -> tuple[Any, ...]:
    """Shrink a failing argument tuple one slot at a time while it keeps failing.

    Args:
        args: The failing arguments.
        fails: Predicate that is true when the arguments still violate the property.
            Arguments that raise a ThetaSpacesError count as not failing.
        proposals: Candidates for slot i, defaults to `candidates`.
        max_rounds: Upper bound on passes over all the slots.

    Returns:
        A failing argument tuple no slot of which can be simplified further.
    """
    propose = proposals or (lambda i, v: candidates(v))
    current = tuple(args)
    for _ in range(max_rounds):
        changed = False
        for i, value in enumerate(current):
            for candidate in propose(i, value):
                trial = current[:i] + (candidate,) + current[i + 1 :]
                try:
                    still = fails(trial)
                except ThetaSpacesError:
                    still = False
                if still:
                    logger.debug("shrink %r -> %r", current, trial)
                    current = trial
                    changed = True
                    break
        if not changed:
            break
    return current

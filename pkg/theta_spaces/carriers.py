from __future__ import annotations

import abc
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

import numpy as np

from .errors import DomainError, UnsupportedError

Point = Any


class Carrier(abc.ABC):
    """The set of points of a space.

    Finite and truncated countable carriers can be enumerated; continuous ones can only
    be sampled.
    """

    enumerable: bool = False

    @abc.abstractmethod
    def contains(self, x: Point) -> bool: ...

    @abc.abstractmethod
    def sample(self, gen: np.random.Generator, count: int) -> list[Point]: ...

    def points(self) -> tuple[Point, ...]:
        raise UnsupportedError(
            "{} cannot be enumerated, the operation needs a finite or truncated "
            "countable carrier.".format(type(self).__name__)
        )


@dataclass(frozen=True)
class FiniteCarrier(Carrier):
    elements: tuple[Point, ...]

    enumerable = True

    @cached_property
    def _members(self) -> frozenset[Point]:
        return frozenset(self.elements)

    def contains(self, x: Point) -> bool:
        try:
            return x in self._members
        except TypeError:
            return False

    def points(self) -> tuple[Point, ...]:
        return self.elements

    def sample(self, gen: np.random.Generator, count: int) -> list[Point]:
        indices = gen.integers(len(self.elements), size=count)
        return [self.elements[int(i)] for i in indices]


@dataclass(frozen=True)
class CountableCarrier(Carrier):
    """A countable carrier truncated at `depth`.

    Enumeration stops at the truncation; membership always uses the analytic `rule`,
    so points beyond the truncation are still accepted.
    """

    enumerate_fn: Callable[[int], Iterable[Point]]
    rule: Callable[[Point], bool]
    depth: int

    enumerable = True

    @cached_property
    def _points(self) -> tuple[Point, ...]:
        return tuple(self.enumerate_fn(self.depth))

    def contains(self, x: Point) -> bool:
        try:
            return bool(self.rule(x))
        except TypeError:
            return False

    def points(self) -> tuple[Point, ...]:
        return self._points

    def sample(self, gen: np.random.Generator, count: int) -> list[Point]:
        indices = gen.integers(len(self._points), size=count)
        return [self._points[int(i)] for i in indices]


@dataclass(frozen=True)
class SampledCarrier(Carrier):
    """A continuous carrier, represented by a seeded sampler over a box."""

    sampler: Callable[[np.random.Generator, int], Sequence[Point]]
    rule: Callable[[Point], bool]
    box: tuple[float, float] = (-1.0, 1.0)

    def contains(self, x: Point) -> bool:
        try:
            return bool(self.rule(x))
        except (TypeError, ValueError):
            return False

    def sample(self, gen: np.random.Generator, count: int) -> list[Point]:
        return list(self.sampler(gen, count))


def is_real(x: Point) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and np.isfinite(x)


def is_plane_point(x: Point) -> bool:
    return isinstance(x, tuple) and len(x) == 2 and all(is_real(c) for c in x)  # type: ignore


def real_sampler(box: tuple[float, float]) -> Callable[[np.random.Generator, int], list[float]]:
    lo, hi = box

    def sample(gen: np.random.Generator, count: int) -> list[float]:
        # a quarter of the draws are rounded to quarters, where ties and corners live
        values = gen.uniform(lo, hi, size=count)
        values[::4] = np.round(values[::4] * 4) / 4
        return [float(v) for v in values]

    return sample


def plane_sampler(
    box: tuple[float, float],
) -> Callable[[np.random.Generator, int], list[tuple[float, float]]]:
    lo, hi = box

    def sample(gen: np.random.Generator, count: int) -> list[tuple[float, float]]:
        values = gen.uniform(lo, hi, size=(count, 2))
        values[::4] = np.round(values[::4] * 4) / 4
        return [(float(a), float(b)) for a, b in values]

    return sample


def point_from_json(value: Any) -> Point:
    """Read a point from a JSON value or command line text.

    Lists become tuples, "p/q" strings become fractions. Python numbers hash and compare
    across int, float and Fraction, so 0.5 finds the carrier element 1/2.

    Raises:
        DomainError: If a string is neither a number nor a fraction.
    """
    if isinstance(value, list):
        return tuple(point_from_json(v) for v in value)  # type: ignore
    if isinstance(value, str):
        text = value.strip()
        if text.startswith(("(", "[")):
            return tuple(point_from_json(v) for v in text[1:-1].split(","))
        try:
            if "/" in text:
                return Fraction(text)
            try:
                return int(text)
            except ValueError:
                return float(text)
        except (ValueError, ZeroDivisionError) as err:
            raise DomainError("{!r} is not a point.".format(value)) from err
    return value

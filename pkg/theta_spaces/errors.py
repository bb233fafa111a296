from __future__ import annotations

from typing import Any


class ThetaSpacesError(Exception):
    """Base class for every error raised by theta_spaces."""


class DomainError(ThetaSpacesError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigurationError(ThetaSpacesError, ValueError):
    """A catalog name, parameter or run configuration is invalid.

    Args:
        message: Human readable description.
        pointer: JSON pointer to the offending field, when known.
    """

    def __init__(self, message: str, pointer: str | None = None):
        super().__init__(message)
        self.pointer = pointer

    def __str__(self) -> str:
        if self.pointer is None:
            return super().__str__()
        return "{} (at {})".format(super().__str__(), self.pointer or "/")


class UnsolvableError(ThetaSpacesError):
    """No ω ∈ [0, target] satisfies θ(x, ω) = target within tolerance."""

    def __init__(self, action: str, target: float, x: float):
        super().__init__(
            "Action {} cannot reach {} from x = {} within [0, {}].".format(
                action, target, x, target
            )
        )
        self.action = action
        self.target = target
        self.x = x


class UnsupportedError(ThetaSpacesError):
    """The operation needs an enumerable carrier."""


class PreconditionError(ThetaSpacesError):
    """A precondition of the operation does not hold."""


class SearchExhaustedError(ThetaSpacesError):
    """A constructive search ran out of candidates."""

    def __init__(self, message: str, tried: int):
        super().__init__(message)
        self.tried = tried


class EvaluationError(ThetaSpacesError):
    """A user supplied function returned a non-finite value."""

    def __init__(self, message: str, node: int, value: Any):
        super().__init__(message)
        self.node = node
        self.value = value

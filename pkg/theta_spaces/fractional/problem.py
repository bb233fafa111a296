from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.special import gamma

from .. import sampling
from ..errors import ConfigurationError, DomainError
from ..report import AxiomReport, Verdict, Witness

logger = logging.getLogger(__name__)

RhsFn = Callable[[Any, Any], Any]


@dataclass(frozen=True)
class Rhs:
    """A right-hand side g(τ, f), vectorized over numpy arrays, with its Lipschitz
    constant in f."""

    name: str
    fn: RhsFn
    lipschitz: float
    text: str = ""

    def __call__(self, tau: Any, value: Any) -> Any:
        return self.fn(tau, value)


def _parse_options(text: str) -> dict[str, str]:
    options: dict[str, str] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(
                "Right-hand side option {!r} is not key=value.".format(item), "/g"
            )
        options[key.strip()] = value.strip()
    return options


def _number(options: dict[str, str], key: str, default: float) -> float:
    try:
        return float(options.pop(key, default))
    except ValueError as err:
        raise ConfigurationError(
            "Right-hand side option {} must be a number.".format(key), "/g"
        ) from err


def _forcing(text: str) -> Callable[[Any], Any]:
    """tau, tau^k or a number."""
    if text == "tau":
        return lambda tau: tau
    if text.startswith("tau^"):
        try:
            power = float(text[4:])
        except ValueError as err:
            raise ConfigurationError("Invalid forcing {!r}.".format(text), "/g") from err
        return lambda tau: np.asarray(tau, dtype=float) ** power
    try:
        c = float(text)
    except ValueError as err:
        raise ConfigurationError("Invalid forcing {!r}.".format(text), "/g") from err
    return lambda tau: c + 0 * np.asarray(tau, dtype=float)


def make_rhs(spec: str) -> Rhs:
    """Parse the right-hand side catalog form `name:key=value,...`.

    zero, constant:c=<number>, linear:lambda=<number>,c=tau|tau^k|<number> (g = λ f + c).
    """
    name, _, rest = spec.strip().partition(":")
    options = _parse_options(rest)
    if name == "zero":
        rhs = Rhs("zero", lambda tau, f: 0 * np.asarray(f, dtype=float), 0.0, spec)
    elif name == "constant":
        c = _number(options, "c", 1.0)
        rhs = Rhs("constant", lambda tau, f: c + 0 * np.asarray(f, dtype=float), 0.0, spec)
    elif name == "linear":
        lam = _number(options, "lambda", 0.0)
        forcing = _forcing(options.pop("c", "0"))
        rhs = Rhs("linear", lambda tau, f: lam * np.asarray(f) + forcing(tau), abs(lam), spec)
    else:
        raise ConfigurationError(
            "Unknown right-hand side {}, expected zero, constant or linear.".format(name),
            "/g",
        )
    if options:
        raise ConfigurationError(
            "Right-hand side {} does not take {}.".format(name, ", ".join(sorted(options))),
            "/g",
        )
    return rhs


@dataclass(frozen=True)
class FdeProblem:
    """D^eta f = g(τ, f) on [0, 1] with f(0) = 0 and ∫₀¹ f = f'(0), 1 < eta <= 2."""

    eta: float
    g: Rhs
    lipschitz_L: float
    n: int = 2000
    tol: float = 1e-10
    max_iter: int = 500

    def __post_init__(self):
        if not (1 < self.eta <= 2):
            raise DomainError("eta must lie in (1, 2], got {}.".format(self.eta))
        if self.n < 2:
            raise DomainError("The grid needs n >= 2, got {}.".format(self.n))
        if not self.tol > 0:
            raise DomainError("tol must be positive, got {}.".format(self.tol))
        if self.lipschitz_L < 0:
            raise DomainError("The Lipschitz constant must be nonnegative.")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1.")

    @classmethod
    def from_rhs(cls, eta: float, g: Rhs | str, **kwargs: Any) -> FdeProblem:
        rhs = make_rhs(g) if isinstance(g, str) else g
        return cls(eta, rhs, rhs.lipschitz, **kwargs)

    @property
    def r(self) -> float:
        """Contraction bound 4 L / Γ(eta + 1) of the integral operator."""
        return 4 * self.lipschitz_L / float(gamma(self.eta + 1))


@dataclass(frozen=True)
class LipschitzReport:
    report: AxiomReport
    r: float

    @property
    def gate_passed(self) -> bool:
        return self.report.verdict is Verdict.PASS and self.r < 1

    def to_json(self) -> dict[str, Any]:
        return {**self.report.to_json(), "r": self.r, "gate_passed": self.gate_passed}


def verify_lipschitz(
    problem: FdeProblem, samples: int = 1000, seed: int = 0
) -> LipschitzReport:
    """Check |g(t, χ₁) - g(t, χ₂)| <= L |χ₁ - χ₂| on sampled (t, χ₁, χ₂) and report
    the implied contraction bound r."""
    if samples < 1:
        raise DomainError("Lipschitz verification needs at least one sample.")
    gen = sampling.rng(seed)
    taus = gen.uniform(0.0, 1.0, size=samples)
    first = sampling.nonneg_reals(gen, samples) * gen.choice([-1.0, 1.0], size=samples)
    second = sampling.nonneg_reals(gen, samples) * gen.choice([-1.0, 1.0], size=samples)

    lhs = np.abs(problem.g(taus, first) - problem.g(taus, second))
    rhs = problem.lipschitz_L * np.abs(first - second)
    bad = np.nonzero(lhs > rhs + 1e-9 * np.maximum(1.0, rhs))[0]
    witness = None
    if bad.size:
        i = int(bad[0])
        witness = Witness(
            (float(first[i]), float(second[i])),
            {"t": float(taus[i])},
            float(lhs[i]),
            float(rhs[i]),
        )
    r = problem.r
    note = "r = {:.6g}{}".format(r, "" if r < 1 else ", not a contraction")
    if not math.isfinite(r):
        note = "r is not finite"
    if witness is None and not r < 1:
        # the gate itself is the counterexample: r = 4 L / Γ(eta + 1) is not below 1
        witness = Witness(
            (), {"L": problem.lipschitz_L, "eta": problem.eta}, r, 1.0, "lhs < rhs"
        )
    report = AxiomReport(
        "lipschitz",
        Verdict.PASS if witness is None else Verdict.FAIL,
        witness,
        trials=samples,
        seed=seed,
        note=note,
    )
    logger.info("lipschitz gate for %s: r = %s", problem.g.name, r)
    return LipschitzReport(report, r)

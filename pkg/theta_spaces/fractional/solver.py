from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.integrate import trapezoid

from ..errors import DomainError, EvaluationError, PreconditionError
from ..metric_core import make_catalog_space
from ..suzuki import FixedPointResult, SelfMap, iterate_fixed_point, register_map
from .grid import GridFunction
from .problem import FdeProblem
from .quadrature import rl_integral_nodes

logger = logging.getLogger(__name__)


def apply_H(problem: FdeProblem, xi: GridFunction) -> GridFunction:
    """H(Ξ)(t) = I^eta[g(·, Ξ)](t) + 2t ∫₀¹ I^eta[g(·, Ξ)](s) ds on the problem grid.

    Raises:
        EvaluationError: If g is not finite at some node.
    """
    if xi.n != problem.n:
        raise DomainError(
            "The iterate lives on n = {}, the problem on n = {}.".format(xi.n, problem.n)
        )
    values = np.broadcast_to(
        np.asarray(problem.g(xi.nodes, xi.values), dtype=float), xi.values.shape
    )
    bad = np.nonzero(~np.isfinite(values))[0]
    if bad.size:
        node = int(bad[0])
        raise EvaluationError(
            "g is not finite at t = {} (node {}).".format(xi.nodes[node], node),
            node,
            float(values[node]),
        )
    integral = rl_integral_nodes(GridFunction(values), problem.eta)
    outer = trapezoid(integral, dx=xi.h)
    result = integral + 2 * xi.nodes * outer
    result[0] = 0.0
    return GridFunction(result)


def h_map(problem: FdeProblem) -> SelfMap:
    return SelfMap("fde_H", lambda xi: apply_H(problem, xi), "integral operator H")


register_map("fde_H", h_map)


@dataclass(frozen=True)
class BoundaryCheck:
    f0: float
    integral: float
    derivative: float

    @property
    def gap(self) -> float:
        return abs(self.integral - self.derivative)

    def to_json(self) -> dict[str, Any]:
        return {
            "f0": self.f0,
            "integral": self.integral,
            "derivative": self.derivative,
            "gap": self.gap,
        }


def boundary_check(solution: GridFunction) -> BoundaryCheck:
    """f(0), ∫₀¹ f (trapezoid) and f'(0) from the one-sided second-order difference."""
    f = solution.values
    derivative = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * solution.h)
    return BoundaryCheck(float(f[0]), float(trapezoid(f, dx=solution.h)), float(derivative))


def solve_fde(problem: FdeProblem, initial: GridFunction | None = None) -> FixedPointResult:
    """Picard iteration of H on the sup-distance grid function space, from zero by
    default.

    Raises:
        PreconditionError: If the contraction bound r is not below 1.
    """
    if problem.r >= 1:
        raise PreconditionError(
            "The Lipschitz gate fails: r = {:.6g} >= 1, H is not known to contract.".format(
                problem.r
            )
        )
    start = initial if initial is not None else GridFunction.zeros(problem.n)
    space = make_catalog_space("sup_grid_space", {"n": problem.n})
    logger.info("solving with eta = %s, n = %d, r = %.6g", problem.eta, problem.n, problem.r)
    return iterate_fixed_point(
        space,
        h_map(problem),
        start,
        tol=problem.tol,
        max_iter=problem.max_iter,
        t_grid=(1.0,),
        keep_trace=False,
    )

from .grid import GridFunction
from .problem import FdeProblem, LipschitzReport, Rhs, make_rhs, verify_lipschitz
from .quadrature import rl_integral, rl_integral_nodes
from .solver import BoundaryCheck, apply_H, boundary_check, h_map, solve_fde

__all__ = [
    "BoundaryCheck",
    "FdeProblem",
    "GridFunction",
    "LipschitzReport",
    "Rhs",
    "apply_H",
    "boundary_check",
    "h_map",
    "make_rhs",
    "rl_integral",
    "rl_integral_nodes",
    "solve_fde",
    "verify_lipschitz",
]

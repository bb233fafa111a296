from __future__ import annotations

import numpy as np
from scipy.special import gamma

from ..errors import DomainError
from .grid import GridFunction


def _check_order(eta: float) -> None:
    if not eta > 0:
        raise DomainError("The integration order must be positive, got {}.".format(eta))


def rl_integral_nodes(fn: GridFunction, eta: float) -> np.ndarray:
    """Riemann-Liouville integral of order eta of `fn` at every node of its grid.

    Product trapezoidal rule: `fn` is replaced by its piecewise linear interpolant and
    the kernel (t - s)^(eta - 1) is integrated exactly on each cell. At t_j = j h

        I(t_j) = h^eta / Γ(eta + 2) (a_j f_0 + Σ_{i=1..j} c_{j-i} f_i)

    with a_j = (j - 1)^(eta + 1) - (j - eta - 1) j^eta, c_0 = 1 and
    c_k = (k + 1)^(eta + 1) + (k - 1)^(eta + 1) - 2 k^(eta + 1).
    """
    _check_order(eta)
    n = fn.n
    f = fn.values
    k = np.arange(1, n + 1, dtype=float)
    p = eta + 1

    c = np.empty(n)
    c[0] = 1.0
    c[1:] = (k[1:] + 1) ** p + (k[1:] - 1) ** p - 2 * k[1:] ** p
    a = (k - 1) ** p - (k - p) * k**eta

    result = np.empty(n + 1)
    result[0] = 0.0
    result[1:] = a * f[0] + np.convolve(c, f[1:])[:n]
    result[1:] *= fn.h**eta / gamma(eta + 2)
    return result


def rl_integral(fn: GridFunction, eta: float, t: float) -> float:
    """Riemann-Liouville integral of order eta of `fn` at any t of [0, 1].

    Same product rule as `rl_integral_nodes`, with the exact kernel moments of the
    cells left of t and of the cell containing t.

    Raises:
        DomainError: If eta <= 0 or t is outside [0, 1].
    """
    _check_order(eta)
    if not (0 <= t <= 1):
        raise DomainError("t must lie in [0, 1], got {}.".format(t))
    if t == 0:
        return 0.0

    h = fn.h
    f = fn.values
    cells = min(int(np.ceil(t / h - 1e-12)), fn.n)
    left = np.arange(cells) * h
    right = np.minimum(left + h, t)

    u0 = t - left
    u1 = t - right
    # ∫ (t - s)^(eta - 1) ds and ∫ (t - s)^(eta - 1) (s - left) ds over each cell
    m0 = (u0**eta - u1**eta) / eta
    m1 = u0 * m0 - (u0 ** (eta + 1) - u1 ** (eta + 1)) / (eta + 1)

    total = np.sum(f[:cells] * (m0 - m1 / h) + f[1 : cells + 1] * (m1 / h))
    return float(total / gamma(eta))

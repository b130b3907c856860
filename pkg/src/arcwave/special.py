"""Real-argument Bessel and Hankel functions of orders 0-2.

Thin wrappers around scipy.special that pin down the domains the kernel
code relies on (real non-negative arguments, orders 0-2) and the
H2 recurrence used throughout: H2(x) = (2/x) H1(x) - H0(x).
"""

import numpy as np
from scipy import special as _sp

_J = {0: _sp.j0, 1: _sp.j1, 2: lambda x: _sp.jv(2, x)}
_Y = {0: _sp.y0, 1: _sp.y1}


def bessel_j(n: int, x):
    """J_n(x) for n in {0, 1, 2} and real x >= 0."""
    if n not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {n}")
    return _J[n](np.asarray(x, dtype=float))


def bessel_y(n: int, x):
    """Y_n(x) for n in {0, 1} and real x > 0."""
    if n not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {n}")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("bessel_y requires x > 0")
    return _Y[n](x)


def hankel1(n: int, x):
    """H_n^{(1)}(x) = J_n(x) + i Y_n(x) for n in {0, 1, 2}, x > 0.

    Y_2 is obtained from the recurrence Y2 = (2/x) Y1 - Y0.
    """
    if n not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {n}")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("hankel1 requires x > 0")
    if n < 2:
        return bessel_j(n, x) + 1j * bessel_y(n, x)
    y2 = (2.0 / x) * bessel_y(1, x) - bessel_y(0, x)
    return bessel_j(2, x) + 1j * y2

"""Unrestarted GMRES for the dense discretized systems.

The operators here are non-Hermitian and moderately sized, so plain
GMRES with full orthogonalization is the method of record: iteration
counts are themselves quantities of interest, so no restarting or
preconditioning is applied. Arnoldi uses modified Gram-Schmidt with a
single reorthogonalization pass, and the least-squares problem is
updated with Givens rotations so the residual norm is available at
every step without extra matvecs.
"""

import time
from dataclasses import dataclass, field

import numpy as np


@dataclass
class SolveReport:
    """Outcome of an iterative solve.

    ``residual_history[k]`` is the relative residual after k
    iterations, starting at 1.0 for the zero initial guess;
    ``wall_seconds`` covers the iteration loop only.
    """

    iterations: int
    converged: bool
    final_residual: float
    wall_seconds: float
    residual_history: list = field(default_factory=list)


class GmresBreakdown(ArithmeticError):
    def __init__(self, iteration: int):
        super().__init__(f"GMRES breakdown at iteration {iteration}")
        self.iteration = iteration


def gmres(op, b, tol: float = 1e-8, maxiter: int | None = None):
    """Solve op x = b to relative residual ``tol``.

    ``op`` is anything with a matvec method or a dense ndarray.
    Returns (x, SolveReport). Non-convergence within ``maxiter`` is not
    an exception; inspect report.converged.
    """
    matvec = op.matvec if hasattr(op, "matvec") else (lambda v: op @ v)
    b = np.asarray(b, dtype=complex)
    n = b.size
    if maxiter is None:
        maxiter = n
    maxiter = min(maxiter, n)

    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros_like(b), SolveReport(0, True, 0.0, 0.0, [0.0])

    t0 = time.perf_counter()
    q = np.empty((maxiter + 1, n), dtype=complex)
    h = np.zeros((maxiter + 1, maxiter), dtype=complex)
    cs = np.zeros(maxiter, dtype=complex)
    sn = np.zeros(maxiter, dtype=complex)
    g = np.zeros(maxiter + 1, dtype=complex)

    q[0] = b / bnorm
    g[0] = bnorm
    history = [1.0]
    k = 0
    converged = False
    for k in range(maxiter):
        v = matvec(q[k])
        # modified Gram-Schmidt with one reorthogonalization pass
        for it in range(2):
            for j in range(k + 1):
                c = q[j].conj() @ v
                v -= c * q[j]
                if it == 0:
                    h[j, k] = c
                else:
                    h[j, k] += c
        hk1 = np.linalg.norm(v)
        h[k + 1, k] = hk1

        # apply accumulated rotations to the new column
        for j in range(k):
            tmp = cs[j] * h[j, k] + sn[j] * h[j + 1, k]
            h[j + 1, k] = -np.conj(sn[j]) * h[j, k] + cs[j] * h[j + 1, k]
            h[j, k] = tmp
        denom = np.hypot(abs(h[k, k]), hk1)
        if denom == 0.0:
            raise GmresBreakdown(k + 1)
        cs[k] = abs(h[k, k]) / denom if h[k, k] != 0 else 0.0
        phase = h[k, k] / abs(h[k, k]) if h[k, k] != 0 else 1.0
        sn[k] = phase * np.conj(h[k + 1, k]) / denom
        h[k, k] = cs[k] * h[k, k] + sn[k] * h[k + 1, k]
        h[k + 1, k] = 0.0
        g[k + 1] = -np.conj(sn[k]) * g[k]
        g[k] = cs[k] * g[k]

        res = abs(g[k + 1]) / bnorm
        history.append(min(res, history[-1]))
        if res <= tol:
            converged = True
            k += 1
            break
        if hk1 == 0.0:
            # happy breakdown: exact solution in the current space
            converged = True
            k += 1
            break
        q[k + 1] = v / hk1
    else:
        k = maxiter

    y = np.linalg.solve(h[:k, :k], g[:k]) if k else np.zeros(0, dtype=complex)
    x = q[:k].T @ y
    wall = time.perf_counter() - t0
    report = SolveReport(
        iterations=k,
        converged=converged,
        final_residual=history[-1],
        wall_seconds=wall,
        residual_history=history,
    )
    return x, report


def direct_solve(op, b):
    """Dense LU solve, for small systems and reference solutions."""
    a = op.materialize() if hasattr(op, "materialize") else np.asarray(op)
    return np.linalg.solve(a, np.asarray(b, dtype=complex))

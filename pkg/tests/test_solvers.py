import numpy as np
import pytest

from arcwave.solvers import GmresBreakdown, direct_solve, gmres


def test_diagonal_system_converges_in_rank_steps():
    a = np.diag(np.arange(1.0, 11.0))
    b = np.ones(10)
    x, report = gmres(a, b, tol=1e-12)
    assert report.converged
    assert report.iterations <= 10
    assert np.allclose(a @ x, b, atol=1e-10)


def test_matches_direct_solve():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
    a += 10.0 * np.eye(40)
    b = rng.standard_normal(40) + 1j * rng.standard_normal(40)
    x, report = gmres(a, b, tol=1e-12)
    assert report.converged
    assert np.allclose(x, direct_solve(a, b), atol=1e-9)


def test_report_residual_is_true_residual():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((30, 30)) + 5.0 * np.eye(30)
    b = rng.standard_normal(30)
    x, report = gmres(a, b, tol=1e-10)
    true_res = np.linalg.norm(a @ x - b) / np.linalg.norm(b)
    assert true_res <= 10 * report.final_residual + 1e-14
    assert report.wall_seconds >= 0.0


def test_maxiter_reports_nonconvergence():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((50, 50)) + 2.0 * np.eye(50)
    b = rng.standard_normal(50)
    x, report = gmres(a, b, tol=1e-14, maxiter=3)
    assert not report.converged
    assert report.iterations == 3


def test_matvec_operator_interface():
    from arcwave.operators import DiscreteOperator

    rng = np.random.default_rng(8)
    a1 = rng.standard_normal((20, 20)) + 4.0 * np.eye(20)
    a2 = rng.standard_normal((20, 20)) + 4.0 * np.eye(20)
    prod = DiscreteOperator(
        factors=[DiscreteOperator(matrix=a1), DiscreteOperator(matrix=a2)]
    )
    b = rng.standard_normal(20)
    x, report = gmres(prod, b, tol=1e-12)
    assert report.converged
    assert np.allclose(a1 @ (a2 @ x), b, atol=1e-9)

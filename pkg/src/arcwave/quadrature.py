"""Spectral quadrature and differentiation on Chebyshev and periodic grids.

Machinery collected here:

* the Symm-type product quadrature for integrals
  int_0^pi log|cos(theta) - cos(theta')| f(theta') dtheta'
  on the Chebyshev angles, exact on cosine modes below the grid size;
* plain trapezoid sums on the same angles for smooth integrands;
* the spectral derivative operators
  D0: values of f(cos(theta)) at the nodes -> df/dt at the nodes,
  T0: f -> d/dtheta (f(theta) sin(theta)) at the nodes;
* the classical periodic product quadrature for closed curves,
  int_0^{2 pi} ln(4 sin^2((t - tau)/2)) f(tau) dtau,
  with equispaced nodes, and FFT-grade periodic differentiation.

Cosine/sine transforms at the Chebyshev angles come in a direct O(N^2)
form and an FFT form; both are exposed so the agreement can be tested.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft as _fft


def chebyshev_angles(n: int) -> np.ndarray:
    """theta_j = pi (2j+1) / (2n), j = 0..n-1."""
    return np.pi * (2 * np.arange(n) + 1) / (2 * n)


# ---------------------------------------------------------------------------
# Symm-type logarithmic quadrature on the Chebyshev angles
# ---------------------------------------------------------------------------

def _symm_lambda(n: int) -> np.ndarray:
    """Eigenvalues of Symm's operator in the cosine basis, modes 0..n-1."""
    lam = np.empty(n)
    lam[0] = np.log(2.0) / 2.0
    lam[1:] = 1.0 / (2.0 * np.arange(1, n))
    return lam


@dataclass(frozen=True)
class SymmWeights:
    """Weight table for the logarithmic rule on n Chebyshev angles.

    R_j(theta_i) = rtable[|i-j|] + rtable[i+j+1].
    """

    n: int
    rtable: np.ndarray

    def matrix(self) -> np.ndarray:
        """Dense (n, n) matrix of R_j(theta_i)."""
        i = np.arange(self.n)
        return self.rtable[np.abs(i[:, None] - i[None, :])] + self.rtable[
            i[:, None] + i[None, :] + 1
        ]

    def at_angle(self, theta: float) -> np.ndarray:
        """R_j(theta) for an arbitrary target angle, j = 0..n-1."""
        m = np.arange(self.n)
        coef = (2.0 - (m == 0)) * _symm_lambda(self.n)
        theta_j = chebyshev_angles(self.n)
        return -2.0 * np.cos(np.outer(theta_j, m)) @ (coef * np.cos(m * theta))


def symm_weights(n: int) -> SymmWeights:
    """Build the weight table; O(n^2) cosine sums."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    m = np.arange(n)
    coef = (2.0 - (m == 0)) * _symm_lambda(n)
    ell = np.arange(2 * n)
    rtable = -np.cos(np.outer(ell, m) * np.pi / n) @ coef
    return SymmWeights(n=n, rtable=rtable)


def log_quadrature(fvals: np.ndarray, weights: SymmWeights, theta: float) -> complex:
    """Approximate int_0^pi log|cos(theta) - cos(theta')| f(theta') dtheta'.

    ``fvals`` samples f at the Chebyshev angles; spectrally accurate for
    analytic f.
    """
    return (np.pi / weights.n) * np.dot(weights.at_angle(theta), fvals)


def trapezoid_cheb(fvals: np.ndarray) -> complex:
    """(pi/N) sum of values at the Chebyshev angles.

    Approximates int_0^pi f(theta) dtheta spectrally for smooth even
    pi-periodic extensions of f.
    """
    fvals = np.asarray(fvals)
    return (np.pi / fvals.shape[0]) * fvals.sum(axis=0)


# ---------------------------------------------------------------------------
# Cosine / sine transforms at the Chebyshev angles
# ---------------------------------------------------------------------------

_FFT_MIN = 256  # direct summation below, FFT at and above


def cos_coefficients(vals: np.ndarray) -> np.ndarray:
    """Coefficients a_n with f(theta_j) = sum_n a_n cos(n theta_j).

    a_n = (2 - delta_{0n})/N * sum_j f(theta_j) cos(n theta_j).
    """
    vals = np.asarray(vals)
    n = vals.shape[0]
    if n < _FFT_MIN:
        theta = chebyshev_angles(n)
        modes = np.arange(n)
        a = (2.0 / n) * np.cos(np.outer(modes, theta)) @ vals
        a[0] /= 2.0
        return a
    a = _fft.dct(vals, type=2, axis=0) / n
    a[0] /= 2.0
    return a


def cos_evaluate(coeffs: np.ndarray) -> np.ndarray:
    """Evaluate sum_n a_n cos(n theta_j) back at the Chebyshev angles."""
    coeffs = np.asarray(coeffs)
    n = coeffs.shape[0]
    if n < _FFT_MIN:
        theta = chebyshev_angles(n)
        return np.cos(np.outer(theta, np.arange(n))) @ coeffs
    x = coeffs.copy()
    x[1:] /= 2.0
    return _fft.dct(x, type=3, axis=0)


def sin_coefficients(vals: np.ndarray) -> np.ndarray:
    """Coefficients b_n with g(theta_j) = sum_{n=1}^{N} b_n sin(n theta_j).

    Returns b[1..N] in an array of length N (index 0 holds b_1).
    """
    vals = np.asarray(vals)
    n = vals.shape[0]
    if n < _FFT_MIN:
        theta = chebyshev_angles(n)
        modes = np.arange(1, n + 1)
        b = (2.0 / n) * np.sin(np.outer(modes, theta)) @ vals
        b[-1] /= 2.0
        return b
    b = _fft.dst(vals, type=2, axis=0) / n
    b[-1] /= 2.0
    return b


def _cheb_derivative_coeffs(a: np.ndarray) -> np.ndarray:
    """Chebyshev-T coefficients of f' from those of f (degree drops by 1)."""
    n = a.shape[0]
    b = np.zeros_like(a)
    if n >= 2:
        b[n - 2] = 2.0 * (n - 1) * a[n - 1]
        for k in range(n - 3, -1, -1):
            b[k] = b[k + 2] + 2.0 * (k + 1) * a[k + 1]
        b[0] /= 2.0
    return b


def d0_derivative(vals: np.ndarray) -> np.ndarray:
    """df/dt at the nodes, where f(t) = f~(arccos t) and vals = f~(theta_j)."""
    return cos_evaluate(_cheb_derivative_coeffs(cos_coefficients(vals)))


def t0_derivative(vals: np.ndarray) -> np.ndarray:
    """d/dtheta (f~(theta) sin(theta)) at the nodes.

    The product is expanded in sin(n theta) and differentiated term by
    term; the top mode n = N contributes cos(N theta_j) = 0 at the nodes.
    """
    vals = np.asarray(vals)
    n = vals.shape[0]
    theta = chebyshev_angles(n)
    b = sin_coefficients(vals * np.sin(theta))
    c = np.zeros(n, dtype=b.dtype)
    c[1:] = np.arange(1, n) * b[: n - 1]
    return cos_evaluate(c)


@lru_cache(maxsize=8)
def d0_matrix(n: int) -> np.ndarray:
    """Dense matrix of d0_derivative on n nodes."""
    return np.column_stack([d0_derivative(col) for col in np.eye(n)])


@lru_cache(maxsize=8)
def t0_matrix(n: int) -> np.ndarray:
    """Dense matrix of t0_derivative on n nodes."""
    return np.column_stack([t0_derivative(col) for col in np.eye(n)])


# ---------------------------------------------------------------------------
# Closed-curve (2 pi periodic) machinery
# ---------------------------------------------------------------------------

def kress_log_weights(n: int) -> np.ndarray:
    """Quadrature matrix R with R[i, j] ~ weights for the periodic log kernel.

    For n equispaced nodes t_j = 2 pi j / n (n even),
    int_0^{2 pi} ln(4 sin^2((t_i - tau)/2)) f(tau) dtau
    ~= sum_j R[i, j] f(t_j), exact for trigonometric polynomials of
    degree < n/2.
    """
    if n < 4 or n % 2:
        raise ValueError(f"need an even n >= 4, got {n}")
    half = n // 2
    ell = np.arange(n)
    m = np.arange(1, half)
    rvec = -(2 * np.pi / half) * np.cos(np.outer(ell, m) * np.pi / half) @ (
        1.0 / m
    ) - (np.pi / half**2) * np.cos(ell * np.pi)
    i = np.arange(n)
    return rvec[(i[:, None] - i[None, :]) % n]


def periodic_diff_matrix(n: int) -> np.ndarray:
    """Spectral differentiation matrix on n equispaced nodes of [0, 2 pi)."""
    if n % 2:
        raise ValueError(f"need an even n, got {n}")
    i = np.arange(n)
    diff = i[:, None] - i[None, :]
    with np.errstate(divide="ignore"):
        d = 0.5 * (-1.0) ** diff / np.tan(np.pi * diff / n)
    np.fill_diagonal(d, 0.0)
    return d

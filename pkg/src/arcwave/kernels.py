"""Pointwise integral kernels for 2D time-harmonic elasticity.

Everything is built from the Helmholtz fundamental solution
gamma_k(x, y) = (i/4) H0^(1)(k |x - y|) at the shear and pressure
wavenumbers. The displacement fundamental tensor is

    E(x, y) = (1/mu) gamma_ks I + (1/(rho omega^2)) Hess_x [gamma_ks - gamma_kp],

with the Hessian expanded analytically in Hankel functions of orders
0-2. Radial building blocks that subtract the two wavenumbers are
evaluated with small-argument series where naive evaluation would
cancel catastrophically (the 1/r poles of Y1 cancel exactly between
the two wavenumbers).

Every kernel K used by the Nyström assemblies admits a logarithmic
split K = K1 * log-kernel + K2 with smooth K1, K2. The K1 factors are
obtained by keeping only the J-Bessel part of each Hankel function and
multiplying by 2i/pi (the coefficient of log r inside Y_n); K2 is
computed by subtraction off the diagonal and from closed-form limits
on it.

Array conventions: separation vectors ``d`` have shape (..., 2) with
r = |d| > 0 unless stated otherwise; matrix-valued kernels return
shape (..., 2, 2).
"""

import numpy as np
from scipy import special as _sp

from .material import Material

EULER_GAMMA = float(np.euler_gamma)

_I2 = np.eye(2)


# ---------------------------------------------------------------------------
# Stable radial building blocks
# ---------------------------------------------------------------------------

def _j1_over_z(z):
    """J1(z)/z, finite at z = 0 (value 1/2)."""
    z = np.asarray(z, dtype=float)
    safe = np.where(z > 1e-6, z, 1.0)
    out = np.where(z > 1e-6, _sp.j1(safe) / safe, 0.5 - z * z / 16.0)
    return out


def _j2_over_z2(z):
    """J2(z)/z^2, finite at z = 0 (value 1/8)."""
    z = np.asarray(z, dtype=float)
    safe = np.where(z > 1e-4, z, 1.0)
    return np.where(z > 1e-4, _sp.jv(2, safe) / safe**2, 0.125 - z * z / 96.0)


def _y1_regular_over_z(z):
    """(Y1(z) + 2/(pi z)) / z, the pole of Y1 removed analytically.

    Series branch below z = 2 avoids the cancellation between Y1 and
    its pole; direct evaluation above.
    """
    z = np.asarray(z, dtype=float)
    small = z < 2.0
    zs = np.where(small, z, 1.0)
    q = zs * zs / 4.0
    # sum_k (psi(k+1) + psi(k+2)) (-1)^k q^k / (2 k! (k+1)!)
    acc = np.zeros_like(zs)
    term = np.ones_like(zs) * 0.5  # q^0 / (2 * 0! * 1!)
    psi_sum = 1.0 - 2.0 * EULER_GAMMA  # psi(1) + psi(2)
    for k in range(18):
        acc = acc + psi_sum * term
        # advance: term_{k+1} = -term_k * q / ((k+1)(k+2))
        term = -term * q / ((k + 1) * (k + 2))
        psi_sum += 1.0 / (k + 1) + 1.0 / (k + 2)
    with np.errstate(divide="ignore"):
        series = (2.0 / np.pi) * np.log(zs / 2.0) * _j1_over_z(zs) - acc / np.pi
    zb = np.where(small, 1.0, z)
    direct = (_sp.y1(zb) + 2.0 / (np.pi * zb)) / zb
    return np.where(small, series, direct)


def _h0(k, r, kind):
    if kind == "h":
        return _sp.hankel1(0, k * r)
    return _sp.j0(k * r).astype(complex)


def _h1(k, r, kind):
    if kind == "h":
        return _sp.hankel1(1, k * r)
    return _sp.j1(k * r).astype(complex)


def helmholtz_gamma(k: float, r, kind: str = "h"):
    """gamma_k at separation r: (i/4) H0^(1)(k r)."""
    return 0.25j * _h0(k, r, kind)


def gamma_log_coeff(k: float, r):
    """Coefficient of log r in gamma_k: -J0(k r) / (2 pi). Finite at r = 0."""
    return -_sp.j0(k * r) / (2.0 * np.pi)


def gamma_smooth_diag(k: float, jac):
    """Diagonal limit of gamma_k - logcoeff * log|t - tau| on a curve."""
    jac = np.asarray(jac, dtype=float)
    return np.asarray(
        0.25j * (1.0 + (2j / np.pi) * (np.log(k * jac / 2.0) + EULER_GAMMA))
    )


def _phi1(m: Material, r, kind: str = "h"):
    """f'(r)/r for f = gamma_ks - gamma_kp; the O(1/r^2) poles cancel.

    This is the scalar in grad_x [gamma_ks - gamma_kp] = phi1 * (x - y).
    """
    ks, kp = m.k_s, m.k_p
    jpart = ks**2 * _j1_over_z(ks * r) - kp**2 * _j1_over_z(kp * r)
    if kind == "j":
        return -0.25j * jpart
    ypart = ks**2 * _y1_regular_over_z(ks * r) - kp**2 * _y1_regular_over_z(kp * r)
    return -0.25j * (jpart + 1j * ypart)


def _h0_k2_diff(m: Material, r, kind: str = "h"):
    """ks^2 h0(ks r) - kp^2 h0(kp r)."""
    return m.k_s**2 * _h0(m.k_s, r, kind) - m.k_p**2 * _h0(m.k_p, r, kind)


def _log_version(kernel_j):
    """Log-r coefficient from the J-Bessel version of a Hankel-built kernel."""
    return (2j / np.pi) * kernel_j


# ---------------------------------------------------------------------------
# Fundamental displacement tensor and its log split
# ---------------------------------------------------------------------------

def navier_tensor(m: Material, d, r, kind: str = "h"):
    """E(x, y) for separation d = x - y, r = |d| > 0. Shape (..., 2, 2)."""
    d = np.asarray(d)
    r = np.asarray(r)
    gs = helmholtz_gamma(m.k_s, r, kind)
    p1 = _phi1(m, r, kind)
    fpp = -0.25j * _h0_k2_diff(m, r, kind) - p1
    rw2 = m.rho * m.omega**2
    rhat = d / r[..., None]
    dyad = rhat[..., :, None] * rhat[..., None, :]
    iso = (gs / m.mu + p1 / rw2)[..., None, None] * _I2
    return iso + ((fpp - p1) / rw2)[..., None, None] * dyad


def navier_log_coeff(m: Material, d, r):
    """E1: coefficient of log|t - tau| in E along a curve. Finite at r = 0.

    Uses d itself (not d/r), so the diagonal d = 0 is handled without
    masking.
    """
    d = np.asarray(d)
    r = np.asarray(r)
    ks, kp = m.k_s, m.k_p
    rw2 = m.rho * m.omega**2
    iso = (
        -_sp.j0(ks * r) / (2.0 * np.pi * m.mu)
        + (ks**2 * _j1_over_z(ks * r) - kp**2 * _j1_over_z(kp * r))
        / (2.0 * np.pi * rw2)
    )
    dy = -(ks**4 * _j2_over_z2(ks * r) - kp**4 * _j2_over_z2(kp * r)) / (
        2.0 * np.pi * rw2
    )
    dyad = d[..., :, None] * d[..., None, :]
    return iso[..., None, None] * _I2 + dy[..., None, None] * dyad


def navier_log_diag(m: Material) -> np.ndarray:
    """E1 on the diagonal: scalar multiple of the identity."""
    s = -1.0 / (2.0 * np.pi * m.mu) + (m.k_s**2 - m.k_p**2) / (
        4.0 * np.pi * m.rho * m.omega**2
    )
    return s * _I2


def navier_smooth_diag(m: Material, jac, tangent_unit):
    """Diagonal limit E2(t, t) of the smooth remainder of the log split.

    ``jac`` is |x'(t)| and ``tangent_unit`` the unit tangent; shapes
    (...,) and (..., 2).
    """
    ks, kp = m.k_s, m.k_p
    rw2 = m.rho * m.omega**2
    jac = np.asarray(jac)
    tu = np.asarray(tangent_unit)
    x = ks**2 - kp**2
    t1 = (0.25j / m.mu) * (
        1.0 + (2j / np.pi) * (np.log(ks * jac / 2.0) + EULER_GAMMA)
    )
    t3 = (-0.25j / rw2) * (
        0.5
        * x
        * (1.0 + (2j / np.pi) * (np.log(jac) + EULER_GAMMA) - 1j / np.pi)
        + (1j / np.pi) * (ks**2 * np.log(ks / 2.0) - kp**2 * np.log(kp / 2.0))
    )
    dyad = tu[..., :, None] * tu[..., None, :]
    iso = np.asarray(t1 + t3)
    return iso[..., None, None] * _I2 + (x / (4.0 * np.pi * rw2)) * dyad


class KernelSplit:
    """Log split of E at a parameter pair: E = e1 * log|t - tau| + e2."""

    __slots__ = ("e1", "e2")

    def __init__(self, e1: np.ndarray, e2: np.ndarray):
        self.e1 = e1
        self.e2 = e2


def kernel_split_E(m: Material, geom, t: float, tau: float) -> KernelSplit:
    """Split E(x(t), x(tau)) with respect to log|t - tau|.

    Off the diagonal e2 is the subtraction remainder; at t == tau both
    factors use their closed-form limits.
    """
    ts = np.asarray([t, tau], dtype=float)
    pts = geom.point(ts)
    if t == tau:
        tan = geom.tangent(np.asarray([t]))[0]
        jac = np.linalg.norm(tan)
        return KernelSplit(navier_log_diag(m), navier_smooth_diag(m, jac, tan / jac))
    d = pts[0] - pts[1]
    r = np.linalg.norm(d)
    e1 = navier_log_coeff(m, d, np.asarray(r))
    e2 = navier_tensor(m, d, np.asarray(r)) - e1 * np.log(abs(t - tau))
    return KernelSplit(e1, e2)


# ---------------------------------------------------------------------------
# Günter matrix and auxiliary kernels of the regularized formulation
# ---------------------------------------------------------------------------

def gunter_matrix() -> np.ndarray:
    """Constant rotation-by-pi/2 matrix of the tangential Günter derivative."""
    return np.array([[0.0, -1.0], [1.0, 0.0]])


def grad_gamma_diff(m: Material, d, r, kind: str = "h"):
    """grad_x [gamma_ks - gamma_kp] = phi1(r) * d; continuous, -> 0 at r = 0."""
    return _phi1(m, np.asarray(r), kind)[..., None] * np.asarray(d)


def weakly_singular_block(m: Material, d, r, nu_x, nu_y, kind: str = "h"):
    """K_W: the weakly singular kernel of the regularized hypersingular form.

    K_W = rho w^2 gamma_kp nu_x nu_y^T
        + k_s^2 gamma_ks [(mu + mu~) tau_y tau_x^T - mu~ tau_x tau_y^T]

    with tau = A nu the unit tangent. The operator term is
    + int K_W (w u) ds. The modified shear coefficient enters through
    m.mu_tilde; setting mu~ = mu gives the kernel of the plain traction.
    """
    r = np.asarray(r)
    nu_x = np.asarray(nu_x)
    nu_y = np.asarray(nu_y)
    tau_x = np.stack([-nu_x[..., 1], nu_x[..., 0]], axis=-1)
    tau_y = np.stack([-nu_y[..., 1], nu_y[..., 0]], axis=-1)
    rw2 = m.rho * m.omega**2
    nxny = nu_x[..., :, None] * nu_y[..., None, :]
    txty = tau_x[..., :, None] * tau_y[..., None, :]
    tytx = tau_y[..., :, None] * tau_x[..., None, :]
    gs = helmholtz_gamma(m.k_s, r, kind)[..., None, None]
    gp = helmholtz_gamma(m.k_p, r, kind)[..., None, None]
    return rw2 * gp * nxny + m.k_s**2 * gs * (
        (m.mu + m.mu_tilde) * tytx - m.mu_tilde * txty
    )


def weakly_singular_log_coeff(m: Material, d, r, nu_x, nu_y):
    """Log|t - tau| coefficient of K_W; finite at r = 0."""
    return _log_version(weakly_singular_block(m, d, r, nu_x, nu_y, kind="j"))


def weakly_singular_smooth_diag(m: Material, jac, nu):
    """Diagonal limit of the smooth remainder of K_W."""
    nu = np.asarray(nu)
    tau = np.stack([-nu[..., 1], nu[..., 0]], axis=-1)
    rw2 = m.rho * m.omega**2
    nn = nu[..., :, None] * nu[..., None, :]
    tt = tau[..., :, None] * tau[..., None, :]
    g2p = gamma_smooth_diag(m.k_p, np.asarray(jac))[..., None, None]
    g2s = gamma_smooth_diag(m.k_s, np.asarray(jac))[..., None, None]
    return rw2 * (g2p * nn + g2s * tt)


def tangential_grad_block_x(m: Material, d, r, nu_x, kind: str = "h"):
    """K_S3 = nu_x (grad_x [gamma_ks - gamma_kp])^T A; vanishes at r = 0."""
    a = gunter_matrix()
    g = grad_gamma_diff(m, d, r, kind)
    row = np.einsum("...k,kj->...j", g, a)
    return np.asarray(nu_x)[..., :, None] * row[..., None, :]


def tangential_grad_block_y(m: Material, d, r, nu_y, kind: str = "h"):
    """K_S4 = A grad_y [gamma_ks - gamma_kp] nu_y^T; vanishes at r = 0."""
    a = gunter_matrix()
    g = -grad_gamma_diff(m, d, r, kind)  # grad_y = -grad w.r.t. d
    col = np.einsum("ik,...k->...i", a, g)
    return col[..., :, None] * np.asarray(nu_y)[..., None, :]


def aux_kernels(m: Material, x, nu_x, y, nu_y) -> dict:
    """All auxiliary kernels of the regularized hypersingular operator
    at a single point pair: K_W, K_S1 = A E A, K_S2 = gamma_ks (scalar),
    K_S3, K_S4."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    r = np.asarray(np.linalg.norm(d))
    if not r > 0:
        raise ValueError("aux_kernels requires x != y")
    a = gunter_matrix()
    return {
        "K_W": weakly_singular_block(m, d, r, nu_x, nu_y),
        "K_S1": a @ navier_tensor(m, d, r) @ a,
        "K_S2": helmholtz_gamma(m.k_s, r),
        "K_S3": tangential_grad_block_x(m, d, r, nu_x),
        "K_S4": tangential_grad_block_y(m, d, r, nu_y),
    }


# ---------------------------------------------------------------------------
# Traction of the fundamental tensor (double-layer type kernels)
# ---------------------------------------------------------------------------

def traction_of_navier_tensor(
    m: Material,
    d,
    r,
    nu,
    wrt: str = "y",
    modified: bool = False,
    kind: str = "h",
):
    """Traction operator applied column-wise to E(x, y).

    ``wrt='y'`` differentiates in the source point with normal nu_y
    (the double-layer kernel before transposition); ``wrt='x'`` gives
    the kernel of the adjoint double-layer operator. ``modified``
    selects the weakly singular unphysical traction coefficients.
    With kind='j' the J-Bessel version is produced, from which the
    log-r coefficient is (2i/pi) times the result.
    """
    d = np.asarray(d)
    r = np.asarray(r)
    nu = np.asarray(nu)
    ks, kp = m.k_s, m.k_p
    rw2 = m.rho * m.omega**2
    mu_t = m.mu_tilde if modified else m.mu
    lam_t = m.lam_tilde if modified else m.lam

    rhat = d / r[..., None]
    gs_p = -0.25j * ks * _h1(ks, r, kind)  # d/dr gamma_ks
    p = _phi1(m, r, kind)
    q = -0.25j * _h0_k2_diff(m, r, kind) - p
    g1 = (q - p) / r
    fppp = 0.25j * (ks**3 * _h1(ks, r, kind) - kp**3 * _h1(kp, r, kind)) - g1
    g3 = fppp - 3.0 * g1

    # grad_d E: de[..., i, j, k] = d/d d_k E_ij
    rrr = rhat[..., :, None, None] * rhat[..., None, :, None] * rhat[..., None, None, :]
    sym = (
        _I2[:, :, None] * rhat[..., None, None, :]
        + _I2[None, :, :] * rhat[..., :, None, None]
        + _I2[:, None, :] * rhat[..., None, :, None]
    )
    de = (gs_p / m.mu)[..., None, None, None] * (
        rhat[..., None, None, :] * _I2[:, :, None]
    ) + (1.0 / rw2) * (g3[..., None, None, None] * rrr + g1[..., None, None, None] * sym)
    if wrt == "y":
        de = -de
    elif wrt != "x":
        raise ValueError("wrt must be 'x' or 'y'")

    grad_nu = np.einsum("...ijk,...k->...ij", de, nu)  # nu . grad of each column
    div = np.einsum("...iji->...j", de)
    curl = de[..., 1, :, 0] - de[..., 0, :, 1]
    rot = np.stack([nu[..., 1], -nu[..., 0]], axis=-1)
    return (
        (m.mu + mu_t) * grad_nu
        + lam_t * nu[..., :, None] * div[..., None, :]
        + mu_t * rot[..., :, None] * curl[..., None, :]
    )

"""Nyström discretizations of the elastic boundary integral operators.

Open arcs use the cosine-transformed grid t = cos(theta) with the
quadrature that integrates log|t - tau| times trigonometric
polynomials exactly; closed curves use the periodic trapezoid rule
with the classical log-kernel correction weights. Both paths split
every kernel as K = K1 * (log kernel) + K2 with smooth K1, K2 and
apply the two quadratures separately.

The hypersingular operator is never evaluated as a finite-part
integral. It is assembled from its integration-by-parts form: a
weakly singular kernel acting on the density plus weakly singular
kernels sandwiched between tangential (Günter) derivatives, which
discretely become differentiation matrices applied on the left and
right of single-layer-type quadratures.

All assembled matrices act on vectors of interleaved components
(u1(t_0), u2(t_0), u1(t_1), ...). Densities are the smooth factors of
the weighted unknowns: on an open arc the single-layer density is
alpha/w and the double-layer density is w*beta, with w(t) = sqrt(1-t^2).
"""

import numpy as np

from . import kernels as kn
from .geometry import ChebyshevGrid, ClosedGrid
from .material import Material
from .quadrature import (
    d0_matrix,
    kress_log_weights,
    periodic_diff_matrix,
    symm_weights,
    t0_matrix,
)

_I2 = np.eye(2)


def to_block(k: np.ndarray) -> np.ndarray:
    """(n, n, 2, 2) kernel samples -> (2n, 2n) interleaved block matrix."""
    n = k.shape[0]
    return np.ascontiguousarray(k.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n))


def _expand2(v: np.ndarray) -> np.ndarray:
    """Per-node scalars -> per-unknown scalars (interleaved components)."""
    return np.repeat(np.asarray(v), 2)


class DiscreteOperator:
    """A dense operator or a lazy product of dense operators.

    Compositions keep their factors so that iterative solvers can use
    matvecs without paying for a matrix-matrix product; spectrum
    computations materialize on demand.
    """

    def __init__(self, matrix=None, factors=None, label: str = ""):
        if (matrix is None) == (factors is None):
            raise ValueError("provide exactly one of matrix, factors")
        self._matrix = matrix
        self._factors = list(factors) if factors is not None else None
        self.label = label

    @property
    def shape(self):
        if self._matrix is not None:
            return self._matrix.shape
        return (self._factors[0].shape[0], self._factors[-1].shape[1])

    def matvec(self, v: np.ndarray) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix @ v
        for f in reversed(self._factors):
            v = f.matvec(v) if isinstance(f, DiscreteOperator) else f @ v
        return v

    def __matmul__(self, other):
        if isinstance(other, DiscreteOperator):
            return DiscreteOperator(
                factors=[self, other], label=f"{self.label}@{other.label}"
            )
        return self.matvec(other)

    def materialize(self) -> np.ndarray:
        if self._matrix is None:
            m = None
            for f in reversed(self._factors):
                fm = f.materialize() if isinstance(f, DiscreteOperator) else f
                m = fm if m is None else fm @ m
            self._matrix = m
        return self._matrix


def spectrum(op, validate: bool = True, seed: int = 0) -> np.ndarray:
    """Eigenvalues of a discrete operator, sorted by real part.

    A random sample of computed eigenpairs is checked against the
    residual ||A v - lambda v|| <= 1e-8 ||A|| as a guard against a
    silently inaccurate eigensolve.
    """
    a = op.materialize() if isinstance(op, DiscreteOperator) else np.asarray(op)
    vals, vecs = np.linalg.eig(a)
    if validate:
        rng = np.random.default_rng(seed)
        norm_a = np.linalg.norm(a, ord=np.inf)
        idx = rng.choice(len(vals), size=min(10, len(vals)), replace=False)
        for i in idx:
            v = vecs[:, i]
            res = np.linalg.norm(a @ v - vals[i] * v)
            if not res <= 1e-8 * max(norm_a, 1.0) * np.linalg.norm(v):
                raise ArithmeticError(
                    f"eigenpair residual {res:.3e} exceeds tolerance"
                )
    order = np.argsort(vals.real, kind="stable")
    return vals[order]


# ---------------------------------------------------------------------------
# Shared pair-grid data
# ---------------------------------------------------------------------------

def _pair_open(grid: ChebyshevGrid):
    pts = grid.points
    d = pts[:, None, :] - pts[None, :, :]
    r = np.linalg.norm(d, axis=-1)
    rlog = r.copy()
    np.fill_diagonal(rlog, 0.0)  # J-kernel evaluations are finite at 0
    rfull = r.copy()
    np.fill_diagonal(rfull, 1.0)  # masked; diagonals overwritten
    logdt = np.log(np.abs(grid.t[:, None] - grid.t[None, :]) + np.eye(grid.n))
    return d, rlog, rfull, logdt


def _pair_closed(grid: ClosedGrid):
    pts = grid.points
    d = pts[:, None, :] - pts[None, :, :]
    r = np.linalg.norm(d, axis=-1)
    rlog = r.copy()
    np.fill_diagonal(rlog, 0.0)
    rfull = r.copy()
    np.fill_diagonal(rfull, 1.0)
    dt = grid.t[:, None] - grid.t[None, :]
    lnk = np.log(4.0 * np.sin(dt / 2.0) ** 2 + np.eye(grid.n))
    return d, rlog, rfull, lnk


def _navier_split_open(m: Material, grid: ChebyshevGrid):
    d, rlog, rfull, logdt = _pair_open(grid)
    e1 = kn.navier_log_coeff(m, d, rlog)
    idx = np.arange(grid.n)
    e1[idx, idx] = kn.navier_log_diag(m)
    e2 = kn.navier_tensor(m, d, rfull) - e1 * logdt[..., None, None]
    tang = grid.tangents / grid.jac[:, None]
    e2[idx, idx] = kn.navier_smooth_diag(m, grid.jac, tang)
    return e1, e2, logdt


def _navier_split_closed(m: Material, grid: ClosedGrid):
    d, rlog, rfull, lnk = _pair_closed(grid)
    e1 = 0.5 * kn.navier_log_coeff(m, d, rlog)
    idx = np.arange(grid.n)
    e1[idx, idx] = 0.5 * kn.navier_log_diag(m)
    e2 = kn.navier_tensor(m, d, rfull) - e1 * lnk[..., None, None]
    tang = grid.tangents / grid.jac[:, None]
    e2[idx, idx] = kn.navier_smooth_diag(m, grid.jac, tang)
    return e1, e2, lnk


# ---------------------------------------------------------------------------
# Open-arc operators
# ---------------------------------------------------------------------------

def _symm_quad(k1, k2, rmat, n, colw=None):
    mat = (np.pi / n) * (k1 * rmat[..., None, None] + k2)
    if colw is not None:
        mat = mat * colw[None, :, None, None]
    return to_block(mat)


def assemble_weighted_single_layer(m: Material, grid: ChebyshevGrid) -> DiscreteOperator:
    """S^w on an open arc, acting on the smooth density alpha/w at the
    transformed nodes and returning boundary values at the same nodes."""
    e1, e2, _ = _navier_split_open(m, grid)
    rmat = symm_weights(grid.n).matrix()
    mat = _symm_quad(e1, e2, rmat, grid.n, colw=grid.jac)
    return DiscreteOperator(matrix=mat, label="Sw")


def assemble_unweighted_single_layer(
    m: Material, grid: ChebyshevGrid
) -> DiscreteOperator:
    """S on an open arc without the edge-weight absorption.

    Acts on nodal values of the density itself with the plain
    ds = |x'| sin(theta) dtheta quadrature. First-kind and compact;
    its smallest eigenvalues shrink as the grid is refined, which is
    the behavior the weighted operators are designed to avoid.
    """
    e1, e2, _ = _navier_split_open(m, grid)
    rmat = symm_weights(grid.n).matrix()
    mat = _symm_quad(e1, e2, rmat, grid.n, colw=grid.jac * grid.w)
    return DiscreteOperator(matrix=mat, label="S_open")


def hypersingular_terms_open(m: Material, grid: ChebyshevGrid, modified: bool):
    """Yield the five summands of the weighted hypersingular operator.

    The signs are included, so the operator matrix is the plain sum.
    Yielding one term at a time keeps at most two n-sized blocks alive
    during assembly.
    """
    mt = m if modified else m.with_physical_traction()
    n = grid.n
    e1, e2, logdt = _navier_split_open(mt, grid)
    d, rlog, rfull, _ = _pair_open(grid)
    rmat = symm_weights(n).matrix()
    idx = np.arange(n)
    nu_x = grid.normals[:, None, :]
    nu_y = grid.normals[None, :, :]
    # terms acting on w*u pick up sin(theta') from the weight and another
    # sin(theta') from ds through the cosine substitution
    cw = grid.jac * grid.w**2
    c = mt.mu + mt.mu_tilde

    # term 1: weakly singular remainder of the regularization
    k1 = kn.weakly_singular_log_coeff(mt, d, rlog, nu_x, nu_y)
    k2 = kn.weakly_singular_block(mt, d, rfull, nu_x, nu_y) - k1 * logdt[..., None, None]
    k2[idx, idx] = kn.weakly_singular_smooth_diag(mt, grid.jac, grid.normals)
    yield _symm_quad(k1, k2, rmat, n, colw=cw)
    del k1, k2

    a = kn.gunter_matrix()
    d0b = np.kron(d0_matrix(n), _I2)
    t0b = np.kron(t0_matrix(n), _I2)
    jinv = _expand2(1.0 / grid.jac)

    # term 2: Günter derivative on both sides of A E A
    s1 = _symm_quad(
        np.einsum("ip,xypq,qj->xyij", a, e1, a),
        np.einsum("ip,xypq,qj->xyij", a, e2, a),
        rmat,
        n,
    )
    yield -(c**2) * (jinv[:, None] * (d0b @ (s1 @ t0b)))
    del s1, e1, e2

    # term 3: scalar shear-wavenumber single layer between derivatives
    g1 = kn.gamma_log_coeff(m.k_s, rlog)
    g2 = kn.helmholtz_gamma(m.k_s, rfull) - g1 * logdt
    g2[idx, idx] = kn.gamma_smooth_diag(m.k_s, grid.jac)
    sg = np.kron((np.pi / n) * (g1 * rmat + g2), _I2)
    yield -2.0 * c * (jinv[:, None] * (d0b @ (sg @ t0b)))
    del g1, g2, sg

    # term 4: mixed kernel with the Günter derivative on the inside only
    k1 = kn._log_version(kn.tangential_grad_block_x(mt, d, rlog, nu_x, kind="j"))
    k2 = (
        kn.tangential_grad_block_x(mt, d, rfull, nu_x)
        - k1 * logdt[..., None, None]
    )
    k2[idx, idx] = 0.0
    yield c * (_symm_quad(k1, k2, rmat, n) @ t0b)
    del k1, k2

    # term 5: mixed kernel with the derivative on the outside only
    k1 = kn._log_version(kn.tangential_grad_block_y(mt, d, rlog, nu_y, kind="j"))
    k2 = (
        kn.tangential_grad_block_y(mt, d, rfull, nu_y)
        - k1 * logdt[..., None, None]
    )
    k2[idx, idx] = 0.0
    yield -c * (jinv[:, None] * (d0b @ _symm_quad(k1, k2, rmat, n, colw=cw)))


def assemble_weighted_hypersingular(
    m: Material, grid: ChebyshevGrid, modified: bool = True
) -> DiscreteOperator:
    """N^w (modified=False) or its weakly singular variant (modified=True)
    on an open arc, acting on the smooth density w*beta.

    The five integration-by-parts terms are quadratures of weakly
    singular kernels composed with the exact differentiation matrices
    of the cosine basis: D0 (d/dt at the nodes) outside, and
    T0 (d/dtheta of sin(theta) times the density) inside, which carries
    the arclength derivative of the weighted density through the
    t = cos(theta) substitution.
    """
    total = None
    for term in hypersingular_terms_open(m, grid, modified):
        total = term if total is None else total + term
    label = "Ntw" if modified else "Nw"
    return DiscreteOperator(matrix=total, label=label)


# ---------------------------------------------------------------------------
# Closed-curve operators
# ---------------------------------------------------------------------------

def _kress_quad(k1, k2, rmat, n, colw=None):
    mat = k1 * rmat[..., None, None] + (2.0 * np.pi / n) * k2
    if colw is not None:
        mat = mat * colw[None, :, None, None]
    return to_block(mat)


def assemble_single_layer_closed(m: Material, grid: ClosedGrid) -> DiscreteOperator:
    """S on a closed curve, acting on nodal density values."""
    e1, e2, _ = _navier_split_closed(m, grid)
    rmat = kress_log_weights(grid.n)
    mat = _kress_quad(e1, e2, rmat, grid.n, colw=grid.jac)
    return DiscreteOperator(matrix=mat, label="S")


def assemble_hypersingular_closed(
    m: Material, grid: ClosedGrid, modified: bool = True
) -> DiscreteOperator:
    """N (modified=False) or its weakly singular variant on a closed curve.

    Same integration-by-parts structure as the open-arc assembly, with
    periodic spectral differentiation in place of the cosine-basis
    matrices; the arclength derivative is diag(1/|x'|) D.
    """
    mt = m if modified else m.with_physical_traction()
    n = grid.n
    e1, e2, lnk = _navier_split_closed(mt, grid)
    d, rlog, rfull, _ = _pair_closed(grid)
    rmat = kress_log_weights(n)
    idx = np.arange(n)
    nu_x = grid.normals[:, None, :]
    nu_y = grid.normals[None, :, :]
    c = mt.mu + mt.mu_tilde

    k1 = 0.5 * kn.weakly_singular_log_coeff(mt, d, rlog, nu_x, nu_y)
    k2 = (
        kn.weakly_singular_block(mt, d, rfull, nu_x, nu_y)
        - k1 * lnk[..., None, None]
    )
    k2[idx, idx] = kn.weakly_singular_smooth_diag(mt, grid.jac, grid.normals)
    total = _kress_quad(k1, k2, rmat, n, colw=grid.jac)
    del k1, k2

    a = kn.gunter_matrix()
    dp = np.kron(periodic_diff_matrix(n), _I2)
    jinv = _expand2(1.0 / grid.jac)
    dds_left = jinv[:, None] * dp  # outer d/ds

    s1 = _kress_quad(
        np.einsum("ip,xypq,qj->xyij", a, e1, a),
        np.einsum("ip,xypq,qj->xyij", a, e2, a),
        rmat,
        n,
    )
    total += c**2 * (dds_left @ (s1 @ dp))
    del s1, e1, e2

    g1 = 0.5 * kn.gamma_log_coeff(m.k_s, rlog)
    g2 = kn.helmholtz_gamma(m.k_s, rfull) - g1 * lnk
    g2[idx, idx] = kn.gamma_smooth_diag(m.k_s, grid.jac)
    sg = np.kron(g1 * rmat + (2.0 * np.pi / n) * g2, _I2)
    total += 2.0 * c * (dds_left @ (sg @ dp))
    del g1, g2, sg

    k1 = 0.5 * kn._log_version(
        kn.tangential_grad_block_x(mt, d, rlog, nu_x, kind="j")
    )
    k2 = (
        kn.tangential_grad_block_x(mt, d, rfull, nu_x)
        - k1 * lnk[..., None, None]
    )
    k2[idx, idx] = 0.0
    total -= c * (_kress_quad(k1, k2, rmat, n) @ dp)
    del k1, k2

    k1 = 0.5 * kn._log_version(
        kn.tangential_grad_block_y(mt, d, rlog, nu_y, kind="j")
    )
    k2 = (
        kn.tangential_grad_block_y(mt, d, rfull, nu_y)
        - k1 * lnk[..., None, None]
    )
    k2[idx, idx] = 0.0
    total -= c * (dds_left @ _kress_quad(k1, k2, rmat, n, colw=grid.jac))
    del k1, k2

    label = "Nt" if modified else "N"
    return DiscreteOperator(matrix=total, label=label)


def assemble_adjoint_double_layer_closed(
    m: Material, grid: ClosedGrid, modified: bool = True
) -> DiscreteOperator:
    """K*: the traction of the single layer on a closed curve.

    With the modified traction the kernel is weakly singular and the
    log-split diagonals, which have no convenient closed form, are
    obtained by extrapolating the kernel along the curve toward each
    node (fitting the a + b*h*log h + c*h local model).
    """
    n = grid.n
    d, rlog, rfull, lnk = _pair_closed(grid)
    rmat = kress_log_weights(n)
    nu_x = grid.normals[:, None, :]

    rr = rlog.copy()
    np.fill_diagonal(rr, 1.0)
    k1 = 0.5 * (2j / np.pi) * kn.traction_of_navier_tensor(
        m, d, rr, nu_x, wrt="x", modified=modified, kind="j"
    )
    k2 = (
        kn.traction_of_navier_tensor(m, d, rfull, nu_x, wrt="x", modified=modified)
        - k1 * lnk[..., None, None]
    )

    # diagonal limits by extrapolation along the parametrization
    hs = np.array([4e-4, 2e-4, 1e-4])
    basis = np.stack([np.ones(3), hs * np.log(hs), hs], axis=1)
    coef = np.linalg.solve(basis.T @ basis, basis.T)
    for i in range(n):
        t0 = grid.t[i]
        x0 = grid.points[i]
        nu0 = grid.normals[i]
        f1 = np.empty((3, 2, 2), dtype=complex)
        f2 = np.empty((3, 2, 2), dtype=complex)
        for q, h in enumerate(hs):
            y = grid.geom.point(np.array([t0 + h]))[0]
            dd = x0 - y
            r = np.asarray(np.linalg.norm(dd))
            v1 = 0.5 * (2j / np.pi) * kn.traction_of_navier_tensor(
                m, dd, r, nu0, wrt="x", modified=modified, kind="j"
            )
            f1[q] = v1
            f2[q] = (
                kn.traction_of_navier_tensor(m, dd, r, nu0, wrt="x", modified=modified)
                - v1 * np.log(4.0 * np.sin(h / 2.0) ** 2)
            )
        k1[i, i] = np.einsum("q,qab->ab", coef[0], f1)
        k2[i, i] = np.einsum("q,qab->ab", coef[0], f2)

    mat = _kress_quad(k1, k2, rmat, n, colw=grid.jac)
    return DiscreteOperator(matrix=mat, label="Kstar" if not modified else "Ktstar")


# ---------------------------------------------------------------------------
# Weight conversions for open-arc densities
# ---------------------------------------------------------------------------

def weight_vector(grid: ChebyshevGrid) -> np.ndarray:
    """w(t_j) = sqrt(1 - t_j^2) repeated per component."""
    return _expand2(grid.w)


# Short-form entry points matching the operator names used throughout.

def assemble_Sw(m: Material, grid: ChebyshevGrid) -> DiscreteOperator:
    return assemble_weighted_single_layer(m, grid)


def assemble_Nw_weighted(
    m: Material, grid: ChebyshevGrid, modified: bool
) -> DiscreteOperator:
    return assemble_weighted_hypersingular(m, grid, modified=modified)


def assemble_closed(m: Material, grid: ClosedGrid, which: str) -> DiscreteOperator:
    if which == "S":
        return assemble_single_layer_closed(m, grid)
    if which == "N":
        return assemble_hypersingular_closed(m, grid, modified=False)
    if which == "Ntilde":
        return assemble_hypersingular_closed(m, grid, modified=True)
    if which == "Kstar":
        return assemble_adjoint_double_layer_closed(m, grid, modified=True)
    raise ValueError(f"unknown closed operator {which!r}")


def compose(left: DiscreteOperator, right: DiscreteOperator) -> DiscreteOperator:
    if left.shape[1] != right.shape[0]:
        raise ValueError(f"dimension mismatch: {left.shape} @ {right.shape}")
    return DiscreteOperator(
        factors=[left, right], label=f"{left.label}@{right.label}"
    )

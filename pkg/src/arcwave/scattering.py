"""Scattering problems: incident fields, formulations, and field evaluation.

Dirichlet problems represent the scattered field as a single-layer
potential and Neumann problems as a double-layer potential. On open
arcs the physical densities carry the known edge behavior through the
weight w(t) = sqrt(1 - t^2): the single-layer density blows up like
1/w and the double-layer density vanishes like w, so the discrete
unknowns are the smooth factors and the operators of the `operators`
module absorb the weights.

Five formulations per topology: the first-kind single-layer equation,
its two second-kind compositions with a hypersingular operator on the
left (physical and modified traction), the first-kind hypersingular
equation for Neumann data, and its composition variant.
"""

import numpy as np
from dataclasses import dataclass

from . import kernels as kn
from . import operators as ops
from .geometry import ChebyshevGrid, ClosedGrid
from .material import Material
from .solvers import SolveReport, gmres

OPEN_FORMULATIONS = ("DirSw", "DirNwSw", "DirNtwSw", "NeuNw", "NeuNwSw")
CLOSED_FORMULATIONS = ("DirS", "DirNS", "DirNtS", "NeuN", "NeuNS")


# ---------------------------------------------------------------------------
# Incident fields
# ---------------------------------------------------------------------------

class PlanePWave:
    """Plane pressure wave u(x) = d exp(i k_p x . d)."""

    def __init__(self, m: Material, theta_inc: float, amplitude: complex = 1.0):
        self.m = m
        self.d = np.array([np.cos(theta_inc), np.sin(theta_inc)])
        self.amplitude = amplitude

    def displacement(self, x):
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * self.m.k_p * (x @ self.d))
        return self.amplitude * phase[..., None] * self.d

    def traction(self, x, nu):
        """T u with the physical coefficients, columnless (per point)."""
        x = np.asarray(x, dtype=float)
        nu = np.asarray(nu, dtype=float)
        m = self.m
        phase = np.exp(1j * m.k_p * (x @ self.d))
        nd = nu @ self.d if nu.ndim == 1 else np.sum(nu * self.d, axis=-1)
        out = 1j * m.k_p * (
            2.0 * m.mu * nd[..., None] * self.d + m.lam * nu
        )
        return self.amplitude * phase[..., None] * out


class PointSource:
    """Exact radiating pressure field u(x) = grad_x H0^(1)(k_p |x - z0|).

    Curl-free by construction; used as manufactured exterior solution
    for closed obstacles enclosing z0.
    """

    def __init__(self, m: Material, z0, amplitude: complex = 1.0):
        self.m = m
        self.z0 = np.asarray(z0, dtype=float)
        self.amplitude = amplitude

    def displacement(self, x):
        x = np.asarray(x, dtype=float)
        d = x - self.z0
        r = np.linalg.norm(d, axis=-1)
        if np.any(r == 0.0):
            raise ValueError("evaluation point coincides with the source")
        kp = self.m.k_p
        from scipy.special import hankel1

        fp = -kp * hankel1(1, kp * r)
        return self.amplitude * (fp / r)[..., None] * d

    def traction(self, x, nu):
        x = np.asarray(x, dtype=float)
        nu = np.asarray(nu, dtype=float)
        m = self.m
        kp = m.k_p
        d = x - self.z0
        r = np.linalg.norm(d, axis=-1)
        if np.any(r == 0.0):
            raise ValueError("evaluation point coincides with the source")
        from scipy.special import hankel1

        rhat = d / r[..., None]
        h0 = hankel1(0, kp * r)
        h1 = hankel1(1, kp * r)
        fp = -kp * h1
        fpp = -kp**2 * h0 + kp * h1 / r
        # Hessian of H0: fpp rhat rhat^T + (fp/r)(I - rhat rhat^T)
        rn = np.sum(rhat * nu, axis=-1)
        hess_nu = (
            (fpp - fp / r)[..., None] * rn[..., None] * rhat
            + (fp / r)[..., None] * nu
        )
        # div u = Laplacian H0 = -kp^2 H0; curl u = 0
        out = 2.0 * m.mu * hess_nu - m.lam * kp**2 * h0[..., None] * nu
        return self.amplitude * out


def incident_plane_pwave(m: Material, theta_inc: float) -> PlanePWave:
    return PlanePWave(m, theta_inc)


def point_source_field(m: Material, z0) -> PointSource:
    return PointSource(m, z0)


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------

def _interleave(f: np.ndarray) -> np.ndarray:
    return np.asarray(f, dtype=complex).reshape(-1)


def _nodal(v: np.ndarray) -> np.ndarray:
    return v.reshape(-1, 2)


@dataclass
class Solution:
    """Solved scattering problem: density plus representation choice.

    ``density`` is the smooth nodal unknown; ``representation`` is
    'single_layer' or 'double_layer' and fixes how near and far fields
    are evaluated.
    """

    formulation: str
    m: Material
    grid: object
    density: np.ndarray  # (n, 2) complex, smooth nodal values
    representation: str
    report: SolveReport


def boundary_data(incident, grid, kind: str) -> np.ndarray:
    """F = -u_inc (Dirichlet) or G = -T u_inc (Neumann) at grid nodes."""
    if kind == "dirichlet":
        return -incident.displacement(grid.points)
    if kind == "neumann":
        return -incident.traction(grid.points, grid.normals)
    raise ValueError(f"unknown boundary data kind {kind!r}")


def build_operators(m: Material, grid, formulation: str) -> dict:
    """Assemble exactly the operators the formulation needs."""
    open_arc = isinstance(grid, ChebyshevGrid)
    if open_arc:
        table = {
            "DirSw": ("Sw",),
            "DirNwSw": ("Nw", "Sw"),
            "DirNtwSw": ("Ntw", "Sw"),
            "NeuNw": ("Nw",),
            "NeuNwSw": ("Nw", "Sw"),
        }
        builders = {
            "Sw": lambda: ops.assemble_Sw(m, grid),
            "Nw": lambda: ops.assemble_Nw_weighted(m, grid, modified=False),
            "Ntw": lambda: ops.assemble_Nw_weighted(m, grid, modified=True),
        }
    else:
        table = {
            "DirS": ("S",),
            "DirNS": ("N", "S"),
            "DirNtS": ("Nt", "S"),
            "NeuN": ("N",),
            "NeuNS": ("N", "S"),
        }
        builders = {
            "S": lambda: ops.assemble_closed(m, grid, "S"),
            "N": lambda: ops.assemble_closed(m, grid, "N"),
            "Nt": lambda: ops.assemble_closed(m, grid, "Ntilde"),
        }
    if formulation not in table:
        topo = "open arcs" if open_arc else "closed curves"
        raise ValueError(f"formulation {formulation!r} not available for {topo}")
    return {k: builders[k]() for k in table[formulation]}

def solve(
    formulation: str,
    m: Material,
    grid,
    incident,
    tol: float = 1e-8,
    maxiter: int | None = None,
    operators: dict | None = None,
) -> Solution:
    """Assemble (unless pre-assembled operators are passed) and solve.

    Composite formulations solve the operator product lazily; their
    right-hand side is the left operator applied to the data samples.
    """
    if operators is None:
        operators = build_operators(m, grid, formulation)
    dirichlet = formulation.startswith("Dir")
    f = _interleave(
        boundary_data(incident, grid, "dirichlet" if dirichlet else "neumann")
    )

    if formulation in ("DirSw", "DirS"):
        a = operators["Sw" if "Sw" in operators else "S"]
        rhs = f
    elif formulation in ("DirNwSw", "DirNS"):
        left = operators.get("Nw", operators.get("N"))
        right = operators.get("Sw", operators.get("S"))
        a = ops.compose(left, right)
        rhs = left.matvec(f)
    elif formulation in ("DirNtwSw", "DirNtS"):
        left = operators.get("Ntw", operators.get("Nt"))
        right = operators.get("Sw", operators.get("S"))
        a = ops.compose(left, right)
        rhs = left.matvec(f)
    elif formulation in ("NeuNw", "NeuN"):
        a = operators.get("Nw", operators.get("N"))
        rhs = f
    elif formulation in ("NeuNwSw", "NeuNS"):
        left = operators.get("Nw", operators.get("N"))
        right = operators.get("Sw", operators.get("S"))
        a = ops.compose(left, right)
        rhs = f
    else:
        raise ValueError(f"unknown formulation {formulation!r}")

    x, report = gmres(a, rhs, tol=tol, maxiter=maxiter)

    if formulation in ("NeuNwSw", "NeuNS"):
        # the auxiliary unknown feeds the single layer; the physical
        # double-layer density is its image
        right = operators.get("Sw", operators.get("S"))
        x = right.matvec(x)
    density = _nodal(x)
    representation = "single_layer" if dirichlet else "double_layer"
    return Solution(formulation, m, grid, density, representation, report)


# ---------------------------------------------------------------------------
# Field evaluation
# ---------------------------------------------------------------------------

def arc_length(grid) -> float:
    if isinstance(grid, ChebyshevGrid):
        return float(np.pi / grid.n * np.sum(grid.jac * grid.w))
    return float(2.0 * np.pi / grid.n * np.sum(grid.jac))


def near_field(
    grid, density: np.ndarray, representation: str, points, m: Material
) -> np.ndarray:
    """Evaluate the layer potential at points off the boundary.

    The quadrature is the plain node rule, accurate only away from the
    curve; points closer than 5 * (arc length) / n are rejected.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    density = np.asarray(density, dtype=complex)
    n = grid.n
    dmin_allowed = 5.0 * arc_length(grid) / n
    d = points[:, None, :] - grid.points[None, :, :]
    r = np.linalg.norm(d, axis=-1)
    closest = np.min(r, axis=1)
    if np.any(closest < dmin_allowed):
        bad = points[np.argmin(closest)]
        raise ValueError(
            f"evaluation point {tuple(bad)} is within {dmin_allowed:.3g} "
            "of the boundary; the plain quadrature is invalid there"
        )

    if isinstance(grid, ChebyshevGrid):
        base = np.pi / n
        if representation == "single_layer":
            wj = base * grid.jac  # 1/w from the density cancels sin(theta) in ds
        elif representation == "double_layer":
            wj = base * grid.jac * grid.w**2  # w from the density, sin from ds
        else:
            raise ValueError(f"unknown representation {representation!r}")
    else:
        wj = 2.0 * np.pi / n * grid.jac

    if representation == "single_layer":
        kmat = kn.navier_tensor(m, d, r)
    elif representation == "double_layer":
        kmat = kn.traction_of_navier_tensor(
            m, d, r, grid.normals[None, :, :], wrt="y", modified=False
        )
        kmat = np.swapaxes(kmat, -1, -2)  # potential uses the transposed kernel
    else:
        raise ValueError(f"unknown representation {representation!r}")
    return np.einsum("pjik,jk,j->pi", kmat, density, wj)


def near_field_of(solution: Solution, points) -> np.ndarray:
    return near_field(
        solution.grid,
        solution.density,
        solution.representation,
        points,
        solution.m,
    )


@dataclass
class FarField:
    directions: np.ndarray  # (k, 2) unit vectors
    up: np.ndarray  # complex pressure-part amplitudes
    us: np.ndarray  # complex shear-part amplitudes


def far_field(grid, density: np.ndarray, m: Material, directions) -> FarField:
    """Angular far-field amplitudes of a single-layer solution.

    up(xhat) integrates exp(-i k_p xhat.y) (xhat . physical density) ds
    and us the orthogonal projection at the shear wavenumber. On open
    arcs the 1/w of the physical density cancels against ds, so the
    smooth density enters with the plain jacobian weight. Material
    prefactors are omitted; compare patterns in relative norms or fit
    one constant against the near field.
    """
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    nrm = np.linalg.norm(directions, axis=-1)
    if not np.allclose(nrm, 1.0, atol=1e-12):
        raise ValueError("far-field directions must be unit vectors")
    density = np.asarray(density, dtype=complex)
    if isinstance(grid, ChebyshevGrid):
        wj = np.pi / grid.n * grid.jac
    else:
        wj = 2.0 * np.pi / grid.n * grid.jac
    perp = directions[:, [1, 0]] * np.array([-1.0, 1.0])
    dots = directions @ grid.points.T  # (k, n)
    up = np.einsum(
        "kj,kj,j->k", np.exp(-1j * m.k_p * dots), directions @ density.T, wj
    )
    us = np.einsum(
        "kj,kj,j->k", np.exp(-1j * m.k_s * dots), perp @ density.T, wj
    )
    return FarField(directions=directions, up=up, us=us)


def far_field_asymptotic(ff: FarField, m: Material, radius: float) -> np.ndarray:
    """Scattered field at radius * xhat predicted by the far-field
    amplitudes, up to one material-dependent complex constant per wave
    type that the omitted kernel prefactors would supply."""
    pref_p = np.exp(1j * (m.k_p * radius + np.pi / 4)) / np.sqrt(
        8.0 * np.pi * m.k_p * radius
    )
    pref_s = np.exp(1j * (m.k_s * radius + np.pi / 4)) / np.sqrt(
        8.0 * np.pi * m.k_s * radius
    )
    perp = ff.directions[:, [1, 0]] * np.array([-1.0, 1.0])
    return (
        pref_p / (m.lam + 2.0 * m.mu) * ff.up[:, None] * ff.directions
        + pref_s / m.mu * ff.us[:, None] * perp
    )

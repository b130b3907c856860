import numpy as np
import pytest

from arcwave import scattering as sc
from arcwave.geometry import ChebyshevGrid, ClosedGrid, discretize, preset_geometry
from arcwave.material import make_material

M = make_material(lam=2.0, mu=1.0, rho=1.0, omega=5.0)

RING = 3.0 * np.stack(
    [
        np.cos(np.linspace(0.0, 2 * np.pi, 12, endpoint=False)),
        np.sin(np.linspace(0.0, 2 * np.pi, 12, endpoint=False)),
    ],
    axis=-1,
)


def test_plane_pwave_traction_matches_finite_differences():
    inc = sc.PlanePWave(M, theta_inc=0.4)
    x = np.array([0.3, -0.2])
    nu = np.array([0.6, 0.8])
    h = 1e-6
    e = np.eye(2)
    grad = np.stack(
        [
            (inc.displacement(x + h * e[k]) - inc.displacement(x - h * e[k]))
            / (2 * h)
            for k in range(2)
        ],
        axis=-1,
    )  # grad[i, k] = d u_i / d x_k
    strain = 0.5 * (grad + grad.T)
    tr = M.lam * np.trace(grad) * nu + 2 * M.mu * strain @ nu
    assert np.allclose(inc.traction(x, nu), tr, atol=1e-6)


def test_point_source_traction_matches_finite_differences():
    inc = sc.PointSource(M, z0=[0.1, 0.2])
    x = np.array([1.3, -0.7])
    nu = np.array([1.0, 0.0])
    h = 1e-6
    e = np.eye(2)
    grad = np.stack(
        [
            (inc.displacement(x + h * e[k]) - inc.displacement(x - h * e[k]))
            / (2 * h)
            for k in range(2)
        ],
        axis=-1,
    )
    strain = 0.5 * (grad + grad.T)
    tr = M.lam * np.trace(grad) * nu + 2 * M.mu * strain @ nu
    assert np.allclose(inc.traction(x, nu), tr, atol=1e-5)


def test_manufactured_circle_all_closed_formulations():
    grid = ClosedGrid.build(preset_geometry("circle", r=1.0), 48)
    inc = sc.PointSource(M, z0=[0.0, 0.3])
    exact = -inc.displacement(RING)
    for form in sc.CLOSED_FORMULATIONS:
        sol = sc.solve(form, M, grid, inc, tol=1e-12)
        assert sol.report.converged, form
        u = sc.near_field_of(sol, RING)
        err = np.max(np.abs(u - exact)) / np.max(np.abs(exact))
        assert err < 1e-8, (form, err)


def test_open_formulations_agree_pairwise():
    grid = ChebyshevGrid.build(preset_geometry("spiral"), 80)
    inc = sc.PlanePWave(M, theta_inc=0.7)
    probes = 6.0 * RING / 3.0
    fields = {}
    for form in sc.OPEN_FORMULATIONS:
        sol = sc.solve(form, M, grid, inc, tol=1e-11)
        assert sol.report.converged, form
        fields[form] = sc.near_field_of(sol, probes)
    scale = np.max(np.abs(fields["DirSw"]))
    for form in ("DirNwSw", "DirNtwSw"):
        assert np.max(np.abs(fields[form] - fields["DirSw"])) < 1e-8 * scale
    scale_n = np.max(np.abs(fields["NeuNw"]))
    assert np.max(np.abs(fields["NeuNwSw"] - fields["NeuNw"])) < 1e-8 * scale_n


def test_near_field_rejects_points_close_to_boundary():
    grid = ClosedGrid.build(preset_geometry("circle", r=1.0), 32)
    dens = np.zeros((32, 2), dtype=complex)
    with pytest.raises(ValueError, match="boundary"):
        sc.near_field(grid, dens, "single_layer", np.array([[1.0001, 0.0]]), M)


def test_boundary_data_kinds():
    grid = discretize(preset_geometry("circle", r=1.0), 16)
    inc = sc.PlanePWave(M, theta_inc=0.0)
    assert np.allclose(
        sc.boundary_data(inc, grid, "dirichlet"), -inc.displacement(grid.points)
    )
    with pytest.raises(ValueError):
        sc.boundary_data(inc, grid, "robin")


def test_far_field_requires_unit_directions():
    grid = discretize(preset_geometry("flat_strip"), 16)
    dens = np.zeros((16, 2), dtype=complex)
    with pytest.raises(ValueError, match="unit"):
        sc.far_field(grid, dens, M, np.array([[2.0, 0.0]]))


def test_far_field_matches_near_field_pattern():
    """The angular shape of |up| and |us| must match the projected near
    field at a large radius, each up to one complex constant."""
    grid = ChebyshevGrid.build(preset_geometry("flat_strip"), 60)
    inc = sc.PlanePWave(M, theta_inc=0.3)
    sol = sc.solve("DirSw", M, grid, inc, tol=1e-12)
    ang = np.linspace(0.1, 2 * np.pi, 40, endpoint=False)
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    ff = sc.far_field(grid, sol.density, M, dirs)
    radius = 200.0
    u = sc.near_field_of(sol, radius * dirs)
    perp = dirs[:, [1, 0]] * np.array([-1.0, 1.0])
    up_near = np.sum(u * dirs, axis=-1)
    us_near = np.sum(u * perp, axis=-1)
    for amp, near in ((ff.up, up_near), (ff.us, us_near)):
        mask = np.abs(amp) > 0.05 * np.max(np.abs(amp))
        ratio = near[mask] / amp[mask]
        assert np.std(np.abs(ratio)) < 2e-2 * np.mean(np.abs(ratio))


def test_composite_neumann_recovers_physical_density():
    grid = ClosedGrid.build(preset_geometry("circle", r=1.0), 48)
    inc = sc.PointSource(M, z0=[0.2, 0.0])
    d1 = sc.solve("NeuN", M, grid, inc, tol=1e-12).density
    d2 = sc.solve("NeuNS", M, grid, inc, tol=1e-12).density
    assert np.max(np.abs(d1 - d2)) < 1e-8 * np.max(np.abs(d1))

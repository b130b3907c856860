import numpy as np
import pytest

from arcwave.geometry import (
    ChebyshevGrid,
    ClosedGrid,
    discretize,
    preset_geometry,
)


def test_chebyshev_nodes_small():
    grid = ChebyshevGrid.build(preset_geometry("flat_strip"), 4)
    expected = np.pi * np.array([1, 3, 5, 7]) / 8
    assert np.allclose(grid.theta, expected, atol=1e-15)
    assert np.allclose(grid.t, np.cos(expected), atol=1e-15)
    assert np.allclose(grid.w, np.sin(expected), atol=1e-15)


def test_flat_strip_fields():
    grid = ChebyshevGrid.build(preset_geometry("flat_strip"), 16)
    assert np.allclose(grid.points[:, 1], 0.0)
    assert np.allclose(grid.jac, 1.0)
    assert np.allclose(np.abs(grid.normals[:, 1]), 1.0)


def test_spiral_tangent_at_zero():
    geom = preset_geometry("spiral")
    tan = geom.tangent(np.array([0.0]))[0]
    assert np.allclose(tan, [1.0, 5.0], atol=1e-12)


def test_normals_unit_and_orthogonal():
    for geom, n in [
        (preset_geometry("spiral"), 30),
        (preset_geometry("circle", r=1.0), 32),
        (preset_geometry("ellipse", a=0.3), 32),
    ]:
        grid = discretize(geom, n)
        assert np.allclose(np.linalg.norm(grid.normals, axis=1), 1.0, atol=1e-13)
        dots = np.sum(grid.normals * grid.tangents, axis=1)
        assert np.allclose(dots, 0.0, atol=1e-12)


def test_closed_grid_rules():
    geom = preset_geometry("circle", r=2.0)
    grid = ClosedGrid.build(geom, 16)
    assert np.allclose(np.linalg.norm(grid.points, axis=1), 2.0, atol=1e-14)
    assert np.allclose(grid.jac, 2.0, atol=1e-14)
    with pytest.raises(ValueError):
        ClosedGrid.build(geom, 15)
    with pytest.raises(ValueError):
        ClosedGrid.build(preset_geometry("flat_strip"), 16)


def test_discretize_dispatch():
    assert isinstance(discretize(preset_geometry("circle", r=1.0), 16), ClosedGrid)
    assert isinstance(discretize(preset_geometry("spiral"), 16), ChebyshevGrid)

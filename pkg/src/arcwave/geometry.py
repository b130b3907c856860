"""Curve parameterizations and their Nyström discretizations.

Open arcs are parameterized over t in [-1, 1] and discretized at the
Chebyshev angles theta_j = pi (2j+1) / (2N), t_j = cos(theta_j), which
is the natural grid for densities with square-root edge behavior. The
edge-vanishing weight is w(t) = sqrt(1 - t^2) = sin(theta).

Closed curves are parameterized over t in [0, 2 pi) and discretized on
an equispaced grid, the natural setting for the periodic logarithmic
quadrature used by the closed-curve operators.

The unit normal everywhere is the clockwise rotation of the unit
tangent, nu = (x2', -x1') / |x'|; assembly and field evaluation share
this convention.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class ArcGeometry:
    """Parameterized smooth curve with analytic first derivative.

    ``point`` and ``tangent`` map an array of parameters to (n, 2)
    arrays. Open arcs use t in [-1, 1]; closed curves use t in [0, 2pi)
    with point(0) == point(2pi).
    """

    name: str
    point: Callable[[np.ndarray], np.ndarray]
    tangent: Callable[[np.ndarray], np.ndarray]
    closed: bool

    def __post_init__(self):
        # |x'(t)| > 0 checked on a dense sample.
        t = (
            np.linspace(0.0, 2 * np.pi, 541)
            if self.closed
            else np.linspace(-1.0, 1.0, 541)
        )
        jac = np.linalg.norm(self.tangent(t), axis=-1)
        if not np.all(jac > 0):
            raise ValueError(f"degenerate parameterization for '{self.name}'")
        if self.closed:
            ends = np.array([0.0, 2 * np.pi])
            if not np.allclose(self.point(ends)[0], self.point(ends)[1], atol=1e-12):
                raise ValueError(f"closed curve '{self.name}' does not close up")

    def normals(self, t: np.ndarray) -> np.ndarray:
        """Unit normals nu = rot(-pi/2) x' / |x'| at parameters t."""
        tan = self.tangent(np.asarray(t, dtype=float))
        jac = np.linalg.norm(tan, axis=-1, keepdims=True)
        return np.stack([tan[..., 1], -tan[..., 0]], axis=-1) / jac


def preset_geometry(name: str, **params) -> ArcGeometry:
    """Build one of the named geometries.

    Presets: ``circle`` (radius r, closed), ``ellipse`` (half-height a,
    closed, x(t) = (cos t, a sin t)), ``flat_strip`` (the segment
    [-1, 1] x {0}), ``spiral`` (x(t) = exp(t) (cos 5t, sin 5t)).
    """
    if name == "circle":
        r = float(params.get("r", 1.0))
        if r <= 0:
            raise ValueError(f"circle radius must be positive, got {r}")
        return ArcGeometry(
            name="circle",
            point=lambda t: r * np.stack([np.cos(t), np.sin(t)], axis=-1),
            tangent=lambda t: r * np.stack([-np.sin(t), np.cos(t)], axis=-1),
            closed=True,
        )
    if name == "ellipse":
        a = float(params.get("a", 1.0))
        if a <= 0:
            raise ValueError(f"ellipse half-height must be positive, got {a}")
        return ArcGeometry(
            name=f"ellipse(a={a})",
            point=lambda t: np.stack([np.cos(t), a * np.sin(t)], axis=-1),
            tangent=lambda t: np.stack([-np.sin(t), a * np.cos(t)], axis=-1),
            closed=True,
        )
    if name == "flat_strip":
        return ArcGeometry(
            name="flat_strip",
            point=lambda t: np.stack([np.asarray(t, dtype=float), np.zeros_like(t, dtype=float)], axis=-1),
            tangent=lambda t: np.stack([np.ones_like(t, dtype=float), np.zeros_like(t, dtype=float)], axis=-1),
            closed=False,
        )
    if name == "spiral":
        def point(t):
            e = np.exp(t)
            return np.stack([e * np.cos(5 * t), e * np.sin(5 * t)], axis=-1)

        def tangent(t):
            e = np.exp(t)
            c, s = np.cos(5 * t), np.sin(5 * t)
            return np.stack([e * (c - 5 * s), e * (s + 5 * c)], axis=-1)

        return ArcGeometry(name="spiral", point=point, tangent=tangent, closed=False)
    raise ValueError(f"unknown preset geometry '{name}'")


@dataclass(frozen=True)
class ChebyshevGrid:
    """Open-arc grid at the Chebyshev angles.

    theta[j] = pi (2j+1) / (2N), t[j] = cos(theta[j]); ``w`` is the
    edge weight sin(theta[j]) = sqrt(1 - t[j]^2).
    """

    geom: ArcGeometry
    n: int
    theta: np.ndarray
    t: np.ndarray
    points: np.ndarray
    jac: np.ndarray
    normals: np.ndarray
    w: np.ndarray
    tangents: np.ndarray

    @classmethod
    def build(cls, geom: ArcGeometry, n: int) -> "ChebyshevGrid":
        if geom.closed:
            raise ValueError("ChebyshevGrid requires an open arc")
        if n < 4:
            raise ValueError(f"need at least 4 nodes, got {n}")
        j = np.arange(n)
        theta = np.pi * (2 * j + 1) / (2 * n)
        t = np.cos(theta)
        tan = geom.tangent(t)
        jac = np.linalg.norm(tan, axis=-1)
        return cls(
            geom=geom,
            n=n,
            theta=theta,
            t=t,
            points=geom.point(t),
            jac=jac,
            normals=geom.normals(t),
            w=np.sin(theta),
            tangents=tan,
        )


@dataclass(frozen=True)
class ClosedGrid:
    """Equispaced periodic grid on a closed curve (even node count)."""

    geom: ArcGeometry
    n: int
    t: np.ndarray
    points: np.ndarray
    jac: np.ndarray
    normals: np.ndarray
    tangents: np.ndarray

    @classmethod
    def build(cls, geom: ArcGeometry, n: int) -> "ClosedGrid":
        if not geom.closed:
            raise ValueError("ClosedGrid requires a closed curve")
        if n < 8 or n % 2:
            raise ValueError(f"need an even node count >= 8, got {n}")
        t = 2 * np.pi * np.arange(n) / n
        tan = geom.tangent(t)
        return cls(
            geom=geom,
            n=n,
            t=t,
            points=geom.point(t),
            jac=np.linalg.norm(tan, axis=-1),
            normals=geom.normals(t),
            tangents=tan,
        )


def discretize(geom: ArcGeometry, n: int):
    """Discretize a geometry with resolution parameter n.

    Open arcs get the n-point Chebyshev grid; closed curves get the
    2n-point equispaced grid used by the periodic Nyström operators.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if geom.closed:
        return ClosedGrid.build(geom, 2 * n)
    return ChebyshevGrid.build(geom, n)

"""arcwave: 2D time-harmonic elastic scattering by boundary integral equations.

Open arcs (cracks, screens) and closed curves, Dirichlet and Neumann
conditions, with spectrally accurate Nystrom quadrature. Open-arc
densities carry the square-root edge behavior through explicit weights;
hypersingular operators are assembled from an exact regularization into
weakly singular kernels and tangential derivatives, and Calderon-style
compositions yield second-kind systems with frequency-robust GMRES
iteration counts.
"""

from .geometry import ArcGeometry, ChebyshevGrid, ClosedGrid, discretize, preset_geometry
from .material import Material, make_material
from .operators import (
    DiscreteOperator,
    assemble_Nw_weighted,
    assemble_Sw,
    assemble_closed,
    assemble_unweighted_single_layer,
    compose,
    spectrum,
)
from .scattering import (
    CLOSED_FORMULATIONS,
    OPEN_FORMULATIONS,
    FarField,
    PlanePWave,
    PointSource,
    Solution,
    far_field,
    far_field_asymptotic,
    near_field,
    near_field_of,
    solve,
)
from .solvers import GmresBreakdown, SolveReport, direct_solve, gmres

__version__ = "0.1.0"

__all__ = [
    "ArcGeometry",
    "ChebyshevGrid",
    "ClosedGrid",
    "CLOSED_FORMULATIONS",
    "DiscreteOperator",
    "FarField",
    "GmresBreakdown",
    "Material",
    "OPEN_FORMULATIONS",
    "PlanePWave",
    "PointSource",
    "Solution",
    "SolveReport",
    "assemble_Nw_weighted",
    "assemble_Sw",
    "assemble_closed",
    "assemble_unweighted_single_layer",
    "compose",
    "direct_solve",
    "discretize",
    "far_field",
    "far_field_asymptotic",
    "gmres",
    "make_material",
    "near_field",
    "near_field_of",
    "preset_geometry",
    "solve",
    "spectrum",
]

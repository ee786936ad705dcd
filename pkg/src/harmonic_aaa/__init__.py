"""Laplace Dirichlet solves and conformal maps via Arnoldi polynomial fits plus AAA poles."""
from .arnoldi import ArnoldiBasisFit, arnoldi_eval, arnoldi_fit
from .conformal import (ConformalMap, gridline_images, map_doubly_connected,
                        map_exterior, map_interior)
from .exceptions import InvalidInput, NumericalFailure
from .geometry import (BoundarySamples, PolygonRegion, RegionClass, blade_boundary,
                       classify_point, cluster_corners, double_boundary, l_shape_boundary,
                       read_boundary_csv, read_vertices_csv)
from .laplace import (ComplexPotential, FieldTable, SolverConfig, evaluate_grid,
                      evaluate_potential, solve_exterior, solve_interior)
from .rational import (BarycentricApproximant, PoleData, aaa, cleanup, evaluate,
                       poles_residues_zeros)

__version__ = "0.1.0"

__all__ = [
    "ArnoldiBasisFit", "arnoldi_eval", "arnoldi_fit",
    "ConformalMap", "gridline_images", "map_doubly_connected", "map_exterior", "map_interior",
    "InvalidInput", "NumericalFailure",
    "BoundarySamples", "PolygonRegion", "RegionClass", "blade_boundary", "classify_point",
    "cluster_corners", "double_boundary", "l_shape_boundary", "read_boundary_csv",
    "read_vertices_csv",
    "ComplexPotential", "FieldTable", "SolverConfig", "evaluate_grid", "evaluate_potential",
    "solve_exterior", "solve_interior",
    "BarycentricApproximant", "PoleData", "aaa", "cleanup", "evaluate", "poles_residues_zeros",
]

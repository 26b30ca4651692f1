"""Order-k Delaunay mosaics, rhomboid tilings and order-k alpha shapes with exact arithmetic."""
from .estimators import OrderKAlphaShape, OrderKDelaunay
from .exceptions import (AffineDependence, DegeneracyError, DimensionMismatch, GeometryError,
                         InfeasibleConstraints, SizeGuardError)
from .geometry import PointSet, Side, Sphere, circumsphere, lift, side_of_sphere
from .oracle import brute_orderk, brute_radius, brute_tiling, mosaics_equal
from .orderk import Cell, Mosaic, Rhomboid, clusters, compute_up_to_order, rhomboid_stream
from .radius import alpha_complex, compute_radius_function, filtration, min_constrained_sphere
from .tiling import RhomboidTiling, build_tiling, slice_at_depth

__version__ = "0.1.0"

__all__ = [
    "OrderKAlphaShape", "OrderKDelaunay", "AffineDependence", "DegeneracyError",
    "DimensionMismatch", "GeometryError", "InfeasibleConstraints", "SizeGuardError",
    "PointSet", "Side", "Sphere", "circumsphere", "lift", "side_of_sphere",
    "brute_orderk", "brute_radius", "brute_tiling", "mosaics_equal",
    "Cell", "Mosaic", "Rhomboid", "clusters", "compute_up_to_order", "rhomboid_stream",
    "alpha_complex", "compute_radius_function", "filtration", "min_constrained_sphere",
    "RhomboidTiling", "build_tiling", "slice_at_depth",
]

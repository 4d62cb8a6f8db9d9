"""Exact rational polyhedral kernel: cones, polyhedra and hyperplane arrangements."""

from .arrangement import ChamberComplex, MergedComplex, arrangement_chambers
from .cone import ConeRep, Halfspace, RepresentationMismatch, cone_from_facets, cone_from_rays, dual_rep
from .polyhedron import DimensionMismatch, Polyhedron, intersect_and_faces

__all__ = [
    "ChamberComplex",
    "ConeRep",
    "DimensionMismatch",
    "Halfspace",
    "MergedComplex",
    "Polyhedron",
    "RepresentationMismatch",
    "arrangement_chambers",
    "cone_from_facets",
    "cone_from_rays",
    "dual_rep",
    "intersect_and_faces",
]

"""Geography of log pairs: classes of boundaries by their wlc models."""

from .affine import Affine, Param
from .analysis import (
    Extension,
    GridOracle,
    Separatrix,
    UndefinedValue,
    e_value,
    extend,
    grid_refines,
    ild_value,
    movable_curve_classes,
    oracle_grid_geography,
    p_movable,
    p_value,
    project_from_origin,
    separatrix_and_projection,
)
from .classify import (
    ClassificationInconsistency,
    FacetTag,
    RidgeTag,
    classify_facet,
    classify_facets,
    classify_ridge,
    classify_ridges,
    generality,
)
from .cube import BoundaryCube, Component, UnsupportedCategory, check_boundary
from .engine import Geography, GeographyClass, compute_geography
from .relations import RELATIONS, equivalence, relation_key
from .surface_backend import SurfaceBackend, surface_pair
from .toric_backend import Payload, ToricBackend, divisor_family, toric_pair


def pair_backend(X, cube: BoundaryCube):
    """Backend for a toric model or a surface lattice."""
    from ..surface import SurfaceLattice

    if isinstance(X, SurfaceLattice):
        return surface_pair(X, cube)
    return toric_pair(X, cube)


def geography_of(X, cube: BoundaryCube) -> Geography:
    return compute_geography(pair_backend(X, cube))


__all__ = [
    "Affine",
    "BoundaryCube",
    "ClassificationInconsistency",
    "Component",
    "Extension",
    "FacetTag",
    "Geography",
    "GeographyClass",
    "GridOracle",
    "Param",
    "Payload",
    "RELATIONS",
    "RidgeTag",
    "Separatrix",
    "SurfaceBackend",
    "ToricBackend",
    "UndefinedValue",
    "UnsupportedCategory",
    "check_boundary",
    "classify_facet",
    "classify_facets",
    "classify_ridge",
    "classify_ridges",
    "compute_geography",
    "divisor_family",
    "e_value",
    "equivalence",
    "extend",
    "generality",
    "geography_of",
    "grid_refines",
    "ild_value",
    "movable_curve_classes",
    "oracle_grid_geography",
    "p_movable",
    "p_value",
    "pair_backend",
    "project_from_origin",
    "relation_key",
    "separatrix_and_projection",
    "surface_pair",
    "toric_pair",
]

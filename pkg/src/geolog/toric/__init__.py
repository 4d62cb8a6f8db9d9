"""Toric models: fans, invariant divisors, intersection numbers and the toric MMP."""

from .divisors import (
    InvariantDivisor,
    NotQCartier,
    divisor_class,
    intersection_number,
    is_ample,
    is_nef,
    log_discrepancy,
    numerics,
    picard_number,
    psi,
    support_function,
)
from .fan import Fan, FanError, ToricModel, Wall, mult, quotient_projection, validate_and_canonicalize
from .ops import (
    Base,
    Contraction,
    ExtremalRay,
    NotExtremal,
    NotSmall,
    contract,
    extremal_rays,
    flip,
    flipped_ray,
    regular_subdivision,
    relative_picard,
    star_subdivide,
)

__all__ = [
    "InvariantDivisor",
    "NotQCartier",
    "divisor_class",
    "intersection_number",
    "is_ample",
    "is_nef",
    "log_discrepancy",
    "numerics",
    "picard_number",
    "psi",
    "support_function",
    "Fan",
    "FanError",
    "ToricModel",
    "Wall",
    "mult",
    "quotient_projection",
    "validate_and_canonicalize",
    "Base",
    "Contraction",
    "ExtremalRay",
    "NotExtremal",
    "NotSmall",
    "contract",
    "extremal_rays",
    "flip",
    "flipped_ray",
    "regular_subdivision",
    "relative_picard",
    "star_subdivide",
    "positive_cone_data",
]


def positive_cone_data(X: ToricModel) -> dict:
    """Nef, effective and mobile cones of X/Z in N^1(X/Z)."""
    num = numerics(X)
    return {"nef": num.nef_cone(), "effective": num.effective_cone(), "mobile": num.mobile_cone()}

"""Standard models and pairs used by the tests, the CLI and the benchmarks."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .geography.cube import BoundaryCube, Component
from .surface import SurfaceLattice, cremona_components, dp6_lattice
from .toric.divisors import InvariantDivisor
from .toric.fan import Fan, ToricModel
from .toric.ops import star_subdivide


def polygon_model(rays: Sequence[Sequence[int]]) -> ToricModel:
    """Complete toric surface from rays listed in cyclic order."""
    rays = [tuple(r) for r in rays]
    n = len(rays)
    return ToricModel(Fan.from_vectors(2, [[rays[i], rays[(i + 1) % n]] for i in range(n)]))


def projective_plane() -> ToricModel:
    return polygon_model([(1, 0), (0, 1), (-1, -1)])


def hirzebruch(n: int) -> ToricModel:
    """F_n with fiber rays (1,0), (-1,n) and sections D_(0,1) (square -n), D_(0,-1)."""
    return polygon_model([(1, 0), (0, 1), (-1, n), (0, -1)])


def dp6_toric() -> ToricModel:
    """P^2 blown up in the three torus fixed points (the hexagon)."""
    return polygon_model([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])


def projective_space(d: int) -> ToricModel:
    e = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    rays = e + [tuple(-1 for _ in range(d))]
    cones = [[r for k, r in enumerate(rays) if k != i] for i in range(d + 1)]
    return ToricModel(Fan.from_vectors(d, cones))


def p3_blowup_point() -> ToricModel:
    return star_subdivide(projective_space(3), (1, 1, 1))


def fn_relative(n: int) -> ToricModel:
    """The cone over the negative section of F_n: the resolution F_n -> Z of a cyclic singularity."""
    return ToricModel(Fan.from_vectors(2, [[(1, 0), (0, 1)], [(0, 1), (-1, n)]], relative_support=[(1, 0), (-1, n)]))


def quadric_cone_flop() -> ToricModel:
    """Small resolution of the 3-fold quadric cone (one side of the Atiyah flop)."""
    v1, v2, v3, v4 = (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)
    return ToricModel(Fan.from_vectors(3, [[v1, v2, v3], [v1, v2, v4]], relative_support=[v1, v2, v3, v4]))


def two_flops() -> tuple[ToricModel, ToricModel]:
    """Two small resolutions over the cone on the rectangle [0,2]x[0,1] differing by two disjoint flops."""
    pts = {(x, y): (x, y, 1) for x in range(3) for y in range(2)}
    sq1 = [(0, 0), (1, 0), (0, 1), (1, 1)]
    sq2 = [(1, 0), (2, 0), (1, 1), (2, 1)]

    def tri(sq, diag):
        a, b, c, d = sq  # a b bottom, c d top
        if diag:
            return [[pts[a], pts[b], pts[d]], [pts[a], pts[c], pts[d]]]
        return [[pts[a], pts[b], pts[c]], [pts[b], pts[c], pts[d]]]

    supp = [pts[(0, 0)], pts[(2, 0)], pts[(0, 1)], pts[(2, 1)]]
    Y = ToricModel(Fan.from_vectors(3, tri(sq1, True) + tri(sq2, True), relative_support=supp))
    Y2 = ToricModel(Fan.from_vectors(3, tri(sq1, False) + tri(sq2, False), relative_support=supp))
    return Y, Y2


def divisor_on(X: ToricModel, coeffs: Mapping[tuple, object]) -> tuple[Fraction, ...]:
    """Invariant divisor coefficients from a ray -> coefficient mapping."""
    for v in coeffs:
        if tuple(v) not in X.rays:
            raise ValueError(f"{v} is not a ray")
    return tuple(Fraction(coeffs.get(v, 0)) for v in X.rays)


def anticanonical(X: ToricModel) -> InvariantDivisor:
    return InvariantDivisor(tuple(Fraction(1) for _ in X.rays))


# -- pairs ------------------------------------------------------------------------------


def fig1_pair(n: int) -> tuple[ToricModel, BoundaryCube]:
    return fn_relative(n), BoundaryCube([Component("C", ray=(0, 1))])


def fig1_surface_pair(n: int) -> tuple[SurfaceLattice, BoundaryCube]:
    from .surface import fn_relative_lattice

    return fn_relative_lattice(n), BoundaryCube([Component("C", curve="C")])


def cremona_pair() -> tuple[SurfaceLattice, BoundaryCube]:
    c = cremona_components()
    return dp6_lattice(), BoundaryCube([Component("D1", cls=c["D1"]), Component("D2", cls=c["D2"])])


def quadric_2a_pair() -> tuple[ToricModel, BoundaryCube]:
    """P^1 x P^1 with S_1 in |3f_1 + f_2| and S_2 in |f_1 + 3f_2|."""
    X = hirzebruch(0)
    f1, f2 = (1, 0), (0, 1)
    return X, BoundaryCube([
        Component("S1", divisor=divisor_on(X, {f1: 3, f2: 1})),
        Component("S2", divisor=divisor_on(X, {f1: 1, f2: 3})),
    ])


def plane_blowup_2b_pair() -> tuple[ToricModel, BoundaryCube]:
    """F_1 with S_1 in |3h + f| and S_2 in |h + f|."""
    X = hirzebruch(1)
    h, f = (0, -1), (1, 0)
    return X, BoundaryCube([
        Component("S1", divisor=divisor_on(X, {h: 3, f: 1})),
        Component("S2", divisor=divisor_on(X, {h: 1, f: 1})),
    ])


def fiber_modification_model() -> ToricModel:
    """F_0 blown up at a torus fixed point, fibered over P^1 by the first coordinate."""
    return polygon_model([(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)])


def fiber_modification_2c_pair() -> tuple[ToricModel, BoundaryCube]:
    """Three ample general members on the blown-up quadric."""
    X = fiber_modification_model()
    # K + B is a positive multiple of the fiber class along a segment through the open cube
    comps = [
        {(-1, 0): 2, (0, -1): 2, (1, 0): 1},
        {(-1, 0): 2, (0, -1): 2, (0, 1): 1},
        {(-1, 0): 2, (0, -1): 2, (0, 1): 1, (1, 0): 1},
    ]
    return X, BoundaryCube([Component(f"S{i + 1}", divisor=divisor_on(X, c)) for i, c in enumerate(comps)])

"""Values of ild, p and e, the separatrix with its projection, extensions and the grid oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..exactgeom.polyhedron import Polyhedron
from .affine import Param
from .cube import BoundaryCube, Component, check_boundary
from .engine import Geography, GeographyClass, compute_geography


class UndefinedValue(ValueError):
    """p and e are only defined on the pseudo-effective region."""


# -- values -----------------------------------------------------------------------------


def ild_value(g: Geography, D, b) -> Fraction:
    """Initial log discrepancy of D: a component name, a ray of X, or a toric valuation.

    Args:
        g: the geography (its backend knows X and the components).
        D: component name, or a primitive lattice vector for toric pairs, or a
            curve label for surface pairs.
        b: boundary coefficients.
    """
    be = g.backend
    b = check_boundary(b, be.m)
    names = be.cube.names
    if isinstance(D, str) and D in names:
        return 1 - b[names.index(D)]
    if be.kind == "toric":
        v = tuple(int(x) for x in D)
        for i, c in enumerate(be.cube.components):
            if c.ray == v:
                return 1 - b[i]
        orig = getattr(be, "original", be.X)
        return Fraction(1) if v in orig.rays else Fraction(0)
    if isinstance(D, str) and any(c.label == D for c in be.S.curves):
        return Fraction(1)
    raise ValueError(f"cannot identify the divisor {D!r}")


def _payload_inside(g: Geography, t):
    pay = g.payload_at(t)
    if not pay.inside:
        raise UndefinedValue("boundary outside the pseudo-effective region")
    return pay


def p_value(g: Geography, curve, t) -> Fraction:
    """p(C, B) = P(B).C for a tracked curve C on the high model."""
    pay = _payload_inside(g, t)
    return pay.p[g.backend.curves.index(curve)]


def e_value(g: Geography, divisor, t) -> Fraction:
    """e(D, B) = mult_D F(B) for a tracked prime b-divisor D."""
    pay = _payload_inside(g, t)
    return pay.e[g.backend.divisors.index(divisor)]


def movable_curve_classes(g: Geography) -> list[tuple]:
    """Generators of the cone of movable curves on the high model V.

    Toric: the dual of Eff(V), in the curve coordinates of numerics(V).
    Surface: the nef cone (movable and nef curves coincide on a surface).
    """
    be = g.backend
    if be.kind == "toric":
        from ..toric.divisors import numerics

        num = numerics(be.V)
        if num.rho == 0:
            return []
        return [tuple(r) for r in num.effective_cone().dual().rays]
    return [tuple(r) for r in be.S.nef_cone().rays]


def p_movable(g: Geography, gamma: Sequence, t) -> Fraction:
    """P(B).gamma for a movable curve class gamma from movable_curve_classes."""
    pay = _payload_inside(g, t)
    be = g.backend
    if be.kind == "toric":
        from ..toric.divisors import numerics

        num = numerics(be.V)
        return sum((Fraction(x) * pay.p[num.basis[k]] for k, x in enumerate(gamma)), Fraction(0))
    S = be.S
    P = list(be.adjoint(g.param.b(t)))
    for lab, x in zip(be.divisors, pay.e):
        c = S.curve(lab)
        P = [a - x * ci for a, ci in zip(P, c)]
    return S.dot(P, gamma)


# -- separatrix --------------------------------------------------------------------------


@dataclass
class Separatrix:
    classes: list[GeographyClass]
    vertices: list[tuple[Fraction, ...]]
    nu_origin: int | float
    nu_top: int | float
    projection: dict = field(default_factory=dict)  # vertex -> pr(vertex)
    image: Polyhedron | None = None

    @property
    def empty(self) -> bool:
        return not self.classes

    @property
    def expected_nonempty(self) -> bool:
        return self.nu_top >= 0 and self.nu_origin == float("-inf")

    def injective(self) -> bool:
        imgs = list(self.projection.values())
        return len(set(imgs)) == len(imgs)


def project_from_origin(b: Sequence) -> tuple[Fraction, ...]:
    """Central projection from 0 onto the hyperplane sum b_i = 1."""
    s = sum(b, Fraction(0))
    if s == 0:
        raise ValueError("the origin has no projection")
    return tuple(Fraction(x) / s for x in b)


def separatrix_and_projection(g: Geography) -> Separatrix:
    """Inside classes in the closure of the outside region, and their projection from 0_S."""
    outs = [c for c in g.classes if not c.inside]
    sep = [c for c in g.inside_classes if any(g.closure_contains(o, c) for o in outs)]
    m = g.param.m
    nu0 = g.payload_at(_t_of(g, tuple(Fraction(0) for _ in range(m)))).nu
    nu1 = g.payload_at(_t_of(g, tuple(Fraction(1) for _ in range(m)))).nu
    verts = sorted({g.param.b(v) for c in sep for v in c.closure.vertices})
    proj = {v: project_from_origin(v) for v in verts if any(x != 0 for x in v)}
    image = Polyhedron.from_generators(sorted(set(proj.values())), n=m) if proj else None
    return Separatrix(sep, verts, nu0, nu1, proj, image)


def _t_of(g: Geography, b):
    if g.param != Param.identity(g.param.m):
        raise ValueError("the separatrix is computed on the full cube")
    return b


# -- extension -------------------------------------------------------------------------------


@dataclass
class Extension:
    small: Geography
    big: Geography
    shift: tuple[Fraction, ...]  # the added coefficients S''

    def embed(self, t: Sequence) -> tuple[Fraction, ...]:
        return tuple(Fraction(x) for x in t) + self.shift

    def slice_equal_at(self, t: Sequence) -> bool:
        """B in N_S iff B + S'' in N_S' (one side of the embedding equality)."""
        return self.small.in_ns(t) == self.big.in_ns(self.embed(t))

    def wlc_preserved(self, t1: Sequence, t2: Sequence) -> bool:
        """B1 ~wlc B2 in the small geography iff their images are in the big one."""
        from .relations import equivalence

        return equivalence(self.small, t1, t2, "wlc") == equivalence(self.big, self.embed(t1), self.embed(t2), "wlc")


def extend(g: Geography, extra: Sequence[Component], make_backend) -> Extension:
    """Geography of S' = S + extra with the embedding B -> B + S''.

    Components that are exceptional on X enter with coefficient 1 (so the
    adjoint b-divisor is unchanged); others enter with coefficient 0.

    Args:
        g: geography over the full cube of S.
        extra: the new components.
        make_backend: callable (cube) -> backend for the same underlying model.
    """
    cube = g.backend.cube
    names = set(cube.names)
    if any(c.name in names for c in extra):
        raise ValueError("extension components must be new")
    big_cube = BoundaryCube(tuple(cube.components) + tuple(extra))
    be = make_backend(big_cube)
    shift = []
    for c in extra:
        exc = be.kind == "toric" and c.ray is not None and c.ray not in getattr(g.backend, "original", g.backend.X).rays
        shift.append(Fraction(1 if exc else 0))
    big = compute_geography(be)
    return Extension(g, big, tuple(shift))


# -- grid oracle --------------------------------------------------------------------------------


@dataclass
class GridOracle:
    points: list[tuple[Fraction, ...]]
    keys: list[tuple]  # (MMP result key, direct signature)

    @property
    def groups(self) -> dict:
        out: dict = {}
        for p, k in zip(self.points, self.keys):
            out.setdefault(k, []).append(p)
        return out


def oracle_grid_geography(backend, resolution: int) -> GridOracle:
    """Sample the cube at pitch 1/resolution, running the MMP and the direct route at each point."""
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    pts, keys = [], []
    grid = [Fraction(i, resolution) for i in range(resolution + 1)]
    for b in product(grid, repeat=backend.m):
        pts.append(b)
        keys.append((backend.mmp_key(b), backend.direct(b).signature))
    return GridOracle(pts, keys)


def grid_refines(g: Geography, oracle: GridOracle) -> bool:
    """Every sample's direct signature matches the chart route, and no oracle group straddles two classes."""
    where: dict = {}
    for b, key in zip(oracle.points, oracle.keys):
        if g.payload_at(b).signature != key[1]:
            return False
        where.setdefault(key, set()).add(g.locate(b))
    return all(len(v) == 1 for v in where.values())

"""Extremal rays, contractions, flips and star subdivisions of toric models."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactgeom.cone import ConeRep, Halfspace, cone_from_facets, cone_from_rays
from ..exactgeom.linalg import dot, is_zero, primitive, rank, solve
from ..exactgeom.polyhedron import Polyhedron
from .divisors import InvariantDivisor, _coeffs, numerics, picard_number, support_function
from .fan import Fan, FanError, ToricModel


class NotExtremal(ValueError):
    pass


class NotSmall(ValueError):
    pass


@dataclass(frozen=True)
class ExtremalRay:
    """An extremal ray of the Mori cone, given by its curve coordinates and walls."""

    coords: tuple[int, ...]
    walls: tuple[int, ...]
    key: tuple

    def __repr__(self):
        return f"ExtremalRay(key={self.key})"


@dataclass
class Base:
    """A base T of a contraction X -> T, as a fan in N/L given by cones in N with lineality L."""

    lineality: tuple[tuple[int, ...], ...]
    cones: tuple[ConeRep, ...]

    @property
    def key(self) -> tuple:
        return (self.lineality, tuple(sorted(c.key() for c in self.cones)))

    @property
    def dim(self) -> int:
        if not self.cones:
            return 0
        return self.cones[0].ambient_dim - len(self.lineality)

    @classmethod
    def point(cls, d: int) -> "Base":
        lin = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
        return cls(lin, (cone_from_rays([], lin, n=d),))

    def contracts(self, v: Sequence) -> bool:
        """True when the orbit closure of a cone with relative interior point v maps to a point."""
        for c in self.cones:
            if c.dim == c.ambient_dim and c.contains_relint(v):
                return True
        return False

    def fan(self) -> Fan:
        d = self.cones[0].ambient_dim if self.cones else 0
        return Fan.from_vectors(d, [list(c.rays) for c in self.cones], lineality=self.lineality)


def over_walls(X: ToricModel, base: Base | None = None) -> list[int]:
    """Indices (into numerics(X).walls) of the curves contracted to points of the base."""
    num = numerics(X)
    if base is None:
        return list(range(len(num.walls)))
    out = []
    for i, w in enumerate(num.walls):
        vec = X.fan.cone_vectors(w.rays)
        q = tuple(sum(v[k] for v in vec) for k in range(X.d))
        if base.contracts(q):
            out.append(i)
    return out


def extremal_rays(X: ToricModel, D=None, base: Base | None = None) -> list[ExtremalRay]:
    """Extremal rays of NE(X/T), D-negative ones only when D is given, sorted by wall key."""
    num = numerics(X)
    idx = over_walls(X, base)
    if num.rho == 0 or not idx:
        return []
    gens = [primitive(num.curve_coords[i]) for i in idx if not is_zero(num.curve_coords[i])]
    if not gens:
        return []
    ne = cone_from_rays(gens, n=num.rho)
    out = []
    for r in ne.rays:
        walls = tuple(
            i
            for i in idx
            if not is_zero(num.curve_coords[i]) and primitive(num.curve_coords[i]) == r
        )
        if not walls:
            continue
        key = min(X.fan.wall_key(num.walls[i]) for i in walls)
        if D is not None and num.intersect(D, walls[0]) >= 0:
            continue
        out.append(ExtremalRay(r, walls, key))
    out.sort(key=lambda e: e.key)
    return out


@dataclass
class Contraction:
    kind: str  # "fibering" | "divisorial" | "small"
    source: ToricModel
    ray: ExtremalRay
    target: ToricModel | None  # birational target
    base: Base | None  # fibering target
    exceptional: tuple[int, ...]  # rays of the source lost by the contraction
    groups: list[list[int]]  # source cones merged into each target cone

    @property
    def target_key(self) -> tuple:
        return self.target.key if self.target is not None else self.base.key


def _supporting_divisor(X: ToricModel, ray: ExtremalRay) -> InvariantDivisor:
    num = numerics(X)
    nef = num.nef_cone()
    face = cone_from_facets(nef.facets, nef.equations + (ray.coords,), num.rho)
    y = face.relint_point()
    return num.lift(y)


def contract(X: ToricModel, ray: ExtremalRay) -> Contraction:
    """Contraction of an extremal ray via the linearity domains of a supporting nef divisor."""
    if not X.q_factorial:
        raise FanError("contractions are computed from Q-factorial models")
    num = numerics(X)
    if not any(primitive(num.curve_coords[i]) == ray.coords for i in ray.walls):
        raise NotExtremal("ray does not match its walls")
    H = _supporting_divisor(X, ray)
    pieces = support_function(X, H)
    groups: dict[tuple, list[int]] = {}
    for ci, m in enumerate(pieces):
        groups.setdefault(tuple(m), []).append(ci)
    glist = sorted(groups.values())
    reps = []
    for g in glist:
        vec = sorted({X.rays[i] for ci in g for i in X.cones[ci]})
        reps.append(cone_from_rays(vec, n=X.d))
    lin = [tuple(l) for l in reps[0].lineality]
    if lin:
        # the linearity domains share the lineality space of the fibre directions
        cones = [cone_from_rays(r.rays, lin, n=X.d) for r in reps]
        base = Base(tuple(lin), tuple(sorted(cones, key=lambda c: c.key())))
        return Contraction("fibering", X, ray, None, base, (), glist)
    cone_vecs = [list(rep.rays) for rep in reps]
    target = ToricModel(Fan.from_vectors(X.d, cone_vecs, relative_support=X.fan.relative_support))
    lost = tuple(i for i, v in enumerate(X.rays) if v not in set(target.rays))
    kind = "divisorial" if lost else "small"
    return Contraction(kind, X, ray, target, None, lost, glist)


def regular_subdivision(vectors: Sequence[Sequence[int]], heights: Sequence[Fraction]) -> list[list[int]]:
    """Cones (as index lists) of the regular subdivision of cone(vectors) by heights.

    A cone is a maximal set of generators tight at a vertex of
    {m : <m, v_i> >= h_i}; the divisor with these heights is strictly concave
    on the resulting fan, i.e. relatively ample.
    """
    d = len(vectors[0])
    hs = [Halfspace(v, h, "closed") for v, h in zip(vectors, heights)]
    poly = Polyhedron(d, hs)
    out = []
    for m in poly.vertices:
        tight = [i for i, (v, h) in enumerate(zip(vectors, heights)) if dot(m, v) == h]
        if rank([vectors[i] for i in tight]) == d:
            out.append(tight)
    return sorted(out)


def flip(X: ToricModel, ray: ExtremalRay, D=None) -> ToricModel:
    """The flip of a small extremal ray.

    Args:
        X: Q-factorial model.
        ray: a small extremal ray.
        D: optional divisor with D.ray < 0 used for the heights; by default
            the sum of the ray divisors meeting the ray negatively.
    """
    c = contract(X, ray)
    if c.kind != "small":
        raise NotSmall(f"flip requested on a {c.kind} ray")
    num = numerics(X)
    col = num.matrix[ray.walls[0]]
    if D is None:
        D = InvariantDivisor(tuple(Fraction(1) if x < 0 else Fraction(0) for x in col))
    coeffs = _coeffs(D)
    if dot(coeffs, col) >= 0:
        raise ValueError("heights divisor must be negative on the flipped ray")
    new_cones = []
    for g in c.groups:
        if len(g) == 1:
            new_cones.append(X.fan.cone_vectors(X.cones[g[0]]))
            continue
        ridx = sorted({i for ci in g for i in X.cones[ci]})
        vec = [X.rays[i] for i in ridx]
        heights = [-coeffs[i] for i in ridx]
        for cone in regular_subdivision(vec, heights):
            new_cones.append([vec[i] for i in cone])
    Y = ToricModel(Fan.from_vectors(X.d, new_cones, relative_support=X.fan.relative_support))
    if not Y.q_factorial:
        raise AssertionError("flip produced a non-simplicial fan")
    return Y


def flipped_ray(X: ToricModel, ray: ExtremalRay, Y: ToricModel) -> ExtremalRay:
    """The opposite small ray on the flipped model Y."""
    numY = numerics(Y)
    old = {frozenset(X.fan.cone_vectors(c)) for c in X.cones}
    for e in extremal_rays(Y):
        w = numY.walls[e.walls[0]]
        cones = [frozenset(Y.fan.cone_vectors(Y.cones[ci])) for ci in w.cones]
        if any(c not in old for c in cones):
            con = contract(Y, e)
            if con.kind == "small":
                return e
    raise AssertionError("no opposite ray found")


def star_subdivide(X: ToricModel, v: Sequence[int]) -> ToricModel:
    """Star subdivision of a simplicial fan at the primitive vector v."""
    v = tuple(int(x) for x in v)
    if primitive(v) != v:
        raise FanError("subdivision vector must be primitive")
    if v in X.rays:
        return X
    new = []
    for c in X.cones:
        vec = X.fan.cone_vectors(c)
        lam = solve([[vec[j][i] for j in range(len(vec))] for i in range(X.d)], list(v)) if len(vec) == X.d else None
        if lam is None or any(x < 0 for x in lam):
            new.append(vec)
            continue
        for j, x in enumerate(lam):
            if x > 0:
                new.append([u for k, u in enumerate(vec) if k != j] + [v])
    return ToricModel(Fan.from_vectors(X.d, new, relative_support=X.fan.relative_support))


def relative_picard(X: ToricModel, target: ToricModel | Base) -> int:
    """rho(X/Z) - rho(T/Z)."""
    tf = target.fan if isinstance(target, ToricModel) else target.fan()
    return picard_number(X.fan) - picard_number(tf)


def _pull(c: ConeRep, rank: dict) -> list[list[tuple[int, ...]]]:
    rays = sorted(c.rays, key=lambda r: rank[r])
    if len(rays) == c.dim:
        return [rays]
    v0 = rays[0]
    out = []
    for f in c.facets:
        if dot(f, v0) == 0:
            continue
        for s in _pull(c.face(f), rank):
            out.append([v0] + s)
    return out


def common_refinement(models: Sequence[ToricModel]) -> ToricModel:
    """Simplicial common refinement of fans with equal support.

    The cones are the full-dimensional intersections of maximal cones, then
    each is triangulated by pulling its rays in one global order, so the
    triangulations agree on shared faces.
    """
    first = models[0]
    d = first.d
    cones = [first.fan.cone_rep(c) for c in first.cones]
    for Y in models[1:]:
        other = [Y.fan.cone_rep(c) for c in Y.cones]
        new = []
        for c in cones:
            for c2 in other:
                i = c.intersect(c2)
                if i.dim == d:
                    new.append(i)
        cones = new
    order = sorted({r for c in cones for r in c.rays})
    rank = {r: i for i, r in enumerate(order)}
    simplices = set()
    for c in cones:
        for s in _pull(c, rank):
            simplices.add(tuple(sorted(s)))
    return ToricModel(Fan.from_vectors(d, sorted(simplices), relative_support=first.fan.relative_support))

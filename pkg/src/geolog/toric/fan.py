"""Fans, toric models and their canonical forms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from ..exactgeom.cone import ConeRep, cone_from_facets, cone_from_rays
from ..exactgeom.linalg import (
    dot,
    gcd_of_minors,
    int_rank,
    integer_kernel,
    is_zero,
    primitive,
    solve,
    det,
)


class FanError(ValueError):
    """Raw fan data violates the fan axioms."""


def _sorted_cone(idx: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(idx)))


@dataclass(frozen=True)
class Wall:
    """A (d-1)-cone of a simplicial fan together with its adjacent maximal cones.

    ``outer`` holds the ray index of each adjacent cone not in the wall; a
    boundary wall of a relative model has a single adjacent cone.
    """

    rays: tuple[int, ...]
    cones: tuple[int, ...]
    outer: tuple[int, ...]

    @property
    def interior(self) -> bool:
        return len(self.cones) == 2


class Fan:
    """A rational polyhedral fan in N = Z^d, stored in canonical order.

    Args:
        lattice_rank: d.
        rays: primitive integer ray generators.
        cones: maximal cones as collections of ray indices.
        relative_support: optional generators of the support cone of a model
            over an affine base; None means the fan should be complete or is
            merely a partial fan.
        lineality: basis of a common lineality space of all cones (used for
            fans of fibration bases living in a quotient of N).
    """

    def __init__(
        self,
        lattice_rank: int,
        rays: Sequence[Sequence[int]],
        cones: Sequence[Iterable[int]],
        relative_support: Sequence[Sequence[int]] | None = None,
        lineality: Sequence[Sequence[int]] = (),
    ):
        self.d = lattice_rank
        raw_rays = [tuple(int(x) for x in r) for r in rays]
        for r in raw_rays:
            if len(r) != lattice_rank:
                raise FanError(f"ray {r} has rank {len(r)}, expected {lattice_rank}")
            if is_zero(r):
                raise FanError("zero ray")
            if primitive(r) != r:
                raise FanError(f"ray {r} is not primitive")
        if len(set(raw_rays)) != len(raw_rays):
            raise FanError("repeated ray")
        order = sorted(range(len(raw_rays)), key=lambda i: raw_rays[i])
        new_index = {old: new for new, old in enumerate(order)}
        self.rays: tuple[tuple[int, ...], ...] = tuple(raw_rays[i] for i in order)
        cs = set()
        for c in cones:
            c = list(c)
            for i in c:
                if not 0 <= i < len(raw_rays):
                    raise FanError(f"cone refers to missing ray {i}")
            cs.add(_sorted_cone(new_index[i] for i in c))
        self.cones: tuple[tuple[int, ...], ...] = tuple(sorted(cs))
        self.relative_support = (
            tuple(sorted(primitive(r) for r in relative_support)) if relative_support is not None else None
        )
        self.lineality = tuple(tuple(int(x) for x in l) for l in lineality)

    # -- identity ----------------------------------------------------------------
    @classmethod
    def from_vectors(cls, d: int, cones: Iterable[Iterable[Sequence[int]]], **kw) -> "Fan":
        """Build a fan from cones given directly by their ray vectors."""
        cones = [[tuple(v) for v in c] for c in cones]
        rays = sorted({v for c in cones for v in c})
        idx = {r: i for i, r in enumerate(rays)}
        return cls(d, rays, [[idx[v] for v in c] for c in cones], **kw)

    def cone_vectors(self, c: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in c]

    @cached_property
    def key(self) -> tuple:
        """Canonical key: the set of maximal cones as canonical ConeReps."""
        return tuple(sorted(self.cone_rep(c).key() for c in self.cones))

    def __eq__(self, other):
        return isinstance(other, Fan) and self.d == other.d and self.key == other.key

    def __hash__(self):
        return hash((self.d, self.key))

    def __repr__(self):
        return f"Fan(d={self.d}, rays={list(self.rays)}, cones={list(self.cones)})"

    def cone_rep(self, c: Sequence[int]) -> ConeRep:
        return cone_from_rays(self.cone_vectors(c), self.lineality, n=self.d)

    # -- shape -------------------------------------------------------------------
    @cached_property
    def simplicial(self) -> bool:
        return all(int_rank(self.cone_vectors(c)) == len(c) for c in self.cones)

    @cached_property
    def full_dimensional(self) -> bool:
        return all(int_rank(self.cone_vectors(c) + list(self.lineality)) == self.d for c in self.cones)

    @cached_property
    def walls(self) -> tuple[Wall, ...]:
        """Walls of a full-dimensional simplicial fan, sorted by their ray vectors."""
        if not (self.simplicial and self.full_dimensional) or self.lineality:
            raise FanError("walls are defined here for full-dimensional simplicial fans")
        table: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for ci, c in enumerate(self.cones):
            for r in c:
                w = tuple(x for x in c if x != r)
                table.setdefault(w, []).append((ci, r))
        out = []
        for w, adj in table.items():
            if len(adj) > 2:
                raise FanError("a wall lies in more than two maximal cones")
            out.append(Wall(w, tuple(a for a, _ in adj), tuple(b for _, b in adj)))
        out.sort(key=lambda w: self.wall_key(w))
        return tuple(out)

    def wall_key(self, w: Wall) -> tuple:
        return tuple(sorted(self.rays[i] for i in w.rays))

    @cached_property
    def interior_walls(self) -> tuple[Wall, ...]:
        return tuple(w for w in self.walls if w.interior)

    @cached_property
    def complete(self) -> bool:
        if self.lineality or not self.cones:
            return False
        try:
            return self.full_dimensional and all(w.interior for w in self.walls)
        except FanError:
            return False

    @cached_property
    def support_cone(self) -> ConeRep | None:
        """Support as a convex cone, or None when the support is not convex."""
        if self.complete:
            return cone_from_rays([], [tuple(1 if i == j else 0 for j in range(self.d)) for i in range(self.d)], n=self.d)
        if not self.full_dimensional or not self.simplicial:
            return None
        hull = cone_from_rays(self.rays, self.lineality, n=self.d)
        for w in self.walls:
            if w.interior:
                continue
            vec = self.cone_vectors(w.rays)
            if not any(all(dot(f, v) == 0 for v in vec) for f in hull.facets):
                return None
        return hull


# ---------------------------------------------------------------------------


def mult(vectors: Sequence[Sequence[int]]) -> int:
    """Multiplicity of a simplicial cone: index of its ray lattice in the saturation."""
    if not vectors:
        return 1
    if len(vectors) == len(vectors[0]):
        return abs(int(det(vectors)))
    return gcd_of_minors(vectors)


class ToricModel:
    """A toric variety X/Z given by a fan; all flags are recomputed, never trusted.

    Args:
        fan: the fan of X.
    """

    def __init__(self, fan: Fan):
        self.fan = fan
        self.d = fan.d

    def __repr__(self):
        return f"ToricModel({self.fan!r})"

    def __eq__(self, other):
        return isinstance(other, ToricModel) and self.fan == other.fan

    def __hash__(self):
        return hash(self.fan)

    @property
    def rays(self):
        return self.fan.rays

    @property
    def cones(self):
        return self.fan.cones

    @cached_property
    def q_factorial(self) -> bool:
        return self.fan.simplicial

    @cached_property
    def complete(self) -> bool:
        return self.fan.complete

    @cached_property
    def support(self) -> ConeRep | None:
        return self.fan.support_cone

    @cached_property
    def relative(self) -> bool:
        """True for a model over a nontrivial affine base (convex incomplete support)."""
        return not self.complete and self.support is not None

    @cached_property
    def projective(self) -> bool:
        """Existence of a strictly convex support function (over the base)."""
        if self.support is None:
            return False
        if self.q_factorial and self.fan.full_dimensional:
            from .divisors import ample_cone_nonempty

            return ample_cone_nonempty(self)
        from .divisors import strictly_convex_exists

        return strictly_convex_exists(self)

    @cached_property
    def key(self) -> tuple:
        return self.fan.key

    @cached_property
    def base_cone(self) -> ConeRep:
        """The cone of the affine base Z (the whole space when Z is a point)."""
        if self.support is None:
            raise FanError("model has no convex support, so no affine base")
        return self.support

    # -- cone lookup -------------------------------------------------------------
    @cached_property
    def _cone_inverse(self):
        inv = []
        for c in self.cones:
            vec = self.fan.cone_vectors(c)
            inv.append(vec)
        return inv

    def cone_containing(self, v: Sequence) -> int:
        """Index of a maximal cone containing v (smallest index)."""
        for ci, c in enumerate(self.cones):
            if self.in_cone(ci, v):
                return ci
        raise ValueError(f"vector {tuple(v)} lies outside the support")

    def in_cone(self, ci: int, v: Sequence) -> bool:
        vec = self._cone_inverse[ci]
        if len(vec) == self.d and self.q_factorial:
            lam = solve([[vec[j][i] for j in range(len(vec))] for i in range(self.d)], list(v))
            return lam is not None and all(x >= 0 for x in lam)
        return self.fan.cone_rep(self.cones[ci]).contains(v)

    def ray_index(self, v: Sequence[int]) -> int | None:
        try:
            return self.rays.index(tuple(v))
        except ValueError:
            return None


def validate_and_canonicalize(fan: Fan) -> ToricModel:
    """Check the fan axioms and return the model with computed flags.

    Raises:
        FanError: overlapping cones, non-primitive rays, rank mismatch, a
            listed ray that is not extremal in its cone, or a relative
            support that differs from the support of the fan.
    """
    d = fan.d
    reps = []
    for c in fan.cones:
        vec = fan.cone_vectors(c)
        rep = fan.cone_rep(c)
        if not fan.lineality and rep.lineality:
            raise FanError(f"cone {c} is not strictly convex")
        got = set(rep.rays)
        want = {primitive(v) for v in vec} if not fan.lineality else got
        if got != want:
            raise FanError(f"cone {c} has a listed ray that is not an extremal ray")
        reps.append(rep)
    for i, j in combinations(range(len(fan.cones)), 2):
        ci, cj = set(fan.cones[i]), set(fan.cones[j])
        if ci <= cj or cj <= ci:
            raise FanError(f"cone {fan.cones[i]} is contained in cone {fan.cones[j]}")
        inter = reps[i].intersect(reps[j])
        common = sorted(ci & cj)
        common_rep = cone_from_rays(fan.cone_vectors(common), fan.lineality, n=d)
        if inter != common_rep:
            raise FanError(f"cones {fan.cones[i]} and {fan.cones[j]} overlap")
        for rep in (reps[i], reps[j]):
            if not _is_face(common_rep, rep):
                raise FanError(f"cones {fan.cones[i]} and {fan.cones[j]} meet outside a common face")
    model = ToricModel(fan)
    if fan.relative_support is not None:
        supp = model.support
        want = cone_from_rays(fan.relative_support, n=d)
        if supp is None or supp != want:
            raise FanError("relative support differs from the support of the fan")
    return model


def _is_face(f: ConeRep, c: ConeRep) -> bool:
    if f.dim == c.dim:
        return f == c
    q = f.relint_point()
    tight = [a for a in c.facets if dot(a, q) == 0]
    face = cone_from_facets(c.facets, c.equations + tuple(tight), c.ambient_dim)
    return face == f


def quotient_projection(lin: Sequence[Sequence[int]], d: int) -> list[tuple[int, ...]]:
    """Integer matrix whose rows are a Z-basis of L-perp in M, i.e. the map N -> N/L."""
    if not lin:
        return [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    return integer_kernel([list(l) for l in lin], d)

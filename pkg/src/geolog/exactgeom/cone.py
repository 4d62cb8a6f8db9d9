"""Exact polyhedral cones in V- and H-representation (double description)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _kernel_select as _k
from .linalg import (
    dot,
    int_nullspace,
    int_rank,
    is_zero,
    primitive,
    qvec,
    row_space_basis,
    solve,
    to_q,
)


class RepresentationMismatch(ValueError):
    """The V- and H-representations handed to ``dual_rep`` describe different cones."""


@dataclass(frozen=True)
class Halfspace:
    """The set {x : normal.x >= offset}, {x : normal.x > offset} or {x : normal.x = offset}.

    ``kind`` is one of "closed", "open", "equal".
    """

    normal: tuple[Fraction, ...]
    offset: Fraction = Fraction(0)
    kind: str = "closed"

    def __post_init__(self):
        object.__setattr__(self, "normal", qvec(self.normal))
        object.__setattr__(self, "offset", to_q(self.offset))
        if self.kind not in ("closed", "open", "equal"):
            raise ValueError(f"unknown halfspace kind {self.kind!r}")
        if is_zero(self.normal):
            raise ValueError("halfspace normal must be nonzero")

    @property
    def strict(self) -> bool:
        return self.kind == "open"

    def value(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) - self.offset

    def contains(self, x: Sequence) -> bool:
        v = self.value(x)
        if self.kind == "closed":
            return v >= 0
        if self.kind == "open":
            return v > 0
        return v == 0

    def closed(self) -> "Halfspace":
        return Halfspace(self.normal, self.offset, "equal" if self.kind == "equal" else "closed")

    def canonical(self) -> tuple:
        """Primitive integer form (a, b) of a.x >= b, used for hashing and sorting."""
        p = primitive(tuple(self.normal) + (self.offset,))
        if self.kind == "equal":
            # fix the sign: first nonzero normal entry positive
            lead = next(x for x in p[:-1] if x != 0)
            if lead < 0:
                p = tuple(-x for x in p)
        return (self.kind,) + p


def _dedupe_rows(rows: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for r in rows:
        if is_zero(r):
            continue
        p = primitive(r)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def vrep_from_hrep(
    ineqs: Sequence[Sequence], eqs: Sequence[Sequence], n: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Generators of {x : A x >= 0, E x = 0}.

    Args:
        ineqs: rows a with a.x >= 0.
        eqs: rows e with e.x = 0.
        n: ambient dimension.

    Returns:
        (rays, lineality): canonical extreme rays of the pointed part, taken in
        the orthogonal complement of the lineality space, and a canonical
        basis of the lineality space.
    """
    a_rows = _dedupe_rows(ineqs)
    e_rows = _dedupe_rows(eqs)
    lin = row_space_basis(int_nullspace(a_rows + e_rows, n)) if (a_rows or e_rows) else [
        tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
    ]
    if not (a_rows or e_rows):
        return [], lin
    basis = int_nullspace(e_rows + lin, n)  # ker(E) intersected with lin-perp
    k = len(basis)
    if k == 0:
        return [], lin
    cons = _dedupe_rows([[dot(a, b) for b in basis] for a in a_rows])
    if k == 1:
        # a half-line or a point (a line is impossible since the part is pointed)
        signs = {c[0] > 0 for c in cons}
        if not cons:
            raise AssertionError("pointed part of dimension one needs a constraint")
        if len(signs) == 2:
            return [], lin
        s = 1 if True in signs else -1
        return [primitive(tuple(s * x for x in basis[0]))], lin
    # pick k independent constraint rows for the initial simplicial cone
    chosen: list[int] = []
    for i, c in enumerate(cons):
        if int_rank([cons[j] for j in chosen] + [c]) > len(chosen):
            chosen.append(i)
            if len(chosen) == k:
                break
    if len(chosen) < k:
        raise AssertionError("constraint system does not pin down a pointed cone")
    bmat = [cons[i] for i in chosen]
    rays = []
    zs = []
    full = 0
    for i in chosen:
        full |= 1 << i
    for j, ci in enumerate(chosen):
        rhs = [Fraction(1 if t == j else 0) for t in range(k)]
        sol = solve(bmat, rhs)
        rays.append(list(primitive(sol)))
        zs.append(full & ~(1 << ci))
    order = [i for i in range(len(cons)) if i not in set(chosen)]
    rays, zs = _k.dd_sweep([list(c) for c in cons], rays, zs, order, k)
    out = set()
    for y in rays:
        x = [sum(y[j] * basis[j][t] for j in range(k)) for t in range(n)]
        out.add(primitive(x))
    return sorted(out), lin


@dataclass(frozen=True)
class ConeRep:
    """A polyhedral cone with both representations in canonical form.

    rays are the extreme rays of the pointed part (orthogonal to the lineality
    space), facets are inequality normals a with a.x >= 0 (orthogonal to the
    span of the equations); everything is primitive integer and sorted.
    """

    ambient_dim: int
    rays: tuple[tuple[int, ...], ...]
    lineality: tuple[tuple[int, ...], ...]
    facets: tuple[tuple[int, ...], ...]
    equations: tuple[tuple[int, ...], ...]

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def facet_normals(self) -> list[Halfspace]:
        return [Halfspace(f, 0, "closed") for f in self.facets] + [
            Halfspace(e, 0, "equal") for e in self.equations
        ]

    def key(self) -> tuple:
        return (self.ambient_dim, self.rays, self.lineality)

    def is_pointed(self) -> bool:
        return not self.lineality

    def is_full(self) -> bool:
        return not self.equations

    def contains(self, x: Sequence) -> bool:
        return all(dot(f, x) >= 0 for f in self.facets) and all(dot(e, x) == 0 for e in self.equations)

    def contains_relint(self, x: Sequence) -> bool:
        return all(dot(f, x) > 0 for f in self.facets) and all(dot(e, x) == 0 for e in self.equations)

    def relint_point(self) -> tuple[Fraction, ...]:
        s = [Fraction(0)] * self.ambient_dim
        for r in self.rays:
            s = [a + b for a, b in zip(s, r)]
        return tuple(s)

    def dual(self) -> "ConeRep":
        """The dual cone {y : y.x >= 0 for x in self}."""
        return ConeRep(self.ambient_dim, self.facets, self.equations, self.rays, self.lineality)

    def intersect(self, other: "ConeRep") -> "ConeRep":
        return cone_from_facets(self.facets + other.facets, self.equations + other.equations, self.ambient_dim)

    def __le__(self, other: "ConeRep") -> bool:  # containment
        return all(other.contains(r) for r in self.rays) and all(
            other.contains(l) and other.contains(tuple(-x for x in l)) for l in self.lineality
        )

    def face(self, normal: Sequence) -> "ConeRep":
        """Face cut out by a supporting normal (normal >= 0 on the cone)."""
        return cone_from_facets(self.facets, self.equations + (tuple(normal),), self.ambient_dim)

    def faces_of_dim(self, d: int) -> list["ConeRep"]:
        """All faces of a given dimension, via intersections of facets."""
        faces = {self.key(): self}
        frontier = [self]
        result = [self] if self.dim == d else []
        while frontier:
            nxt = []
            for c in frontier:
                if c.dim <= d:
                    continue
                for f in c.facets:
                    g = c.face(f)
                    if g.key() not in faces and g.dim == c.dim - 1:
                        faces[g.key()] = g
                        nxt.append(g)
                        if g.dim == d:
                            result.append(g)
            frontier = nxt
        return sorted(result, key=lambda c: c.key())


def cone_from_rays(rays: Sequence[Sequence], lineality: Sequence[Sequence] = (), n: int | None = None) -> ConeRep:
    """Cone generated by rays plus a linear subspace."""
    if n is None:
        src = list(rays) or list(lineality)
        if not src:
            raise ValueError("ambient dimension needed for the zero cone")
        n = len(src[0])
    gens = [primitive(r) for r in rays if not is_zero(r)]
    lin_in = [primitive(l) for l in lineality if not is_zero(l)]
    # dual cone: {y : y.r >= 0, y.l = 0}
    facets, eqs = vrep_from_hrep(gens + lin_in + [tuple(-x for x in l) for l in lin_in], [], n) if (gens or lin_in) else (
        [],
        [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)],
    )
    rays_c, lin_c = vrep_from_hrep(facets, eqs, n)
    return ConeRep(n, tuple(rays_c), tuple(lin_c), tuple(facets), tuple(eqs))


def cone_from_facets(facets: Sequence[Sequence], equations: Sequence[Sequence] = (), n: int | None = None) -> ConeRep:
    """Cone {x : a.x >= 0 for a in facets, e.x = 0 for e in equations}."""
    if n is None:
        src = list(facets) or list(equations)
        if not src:
            raise ValueError("ambient dimension needed for the full space")
        n = len(src[0])
    rays_c, lin_c = vrep_from_hrep([primitive(f) for f in facets if not is_zero(f)], [primitive(e) for e in equations if not is_zero(e)], n)
    if rays_c or lin_c:
        f2, e2 = vrep_from_hrep(rays_c + lin_c + [tuple(-x for x in l) for l in lin_c], [], n)
    else:
        f2, e2 = [], [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return ConeRep(n, tuple(rays_c), tuple(lin_c), tuple(f2), tuple(e2))


def dual_rep(
    rays: Sequence[Sequence] | None = None,
    facets: Sequence[Sequence] | None = None,
    lineality: Sequence[Sequence] = (),
    equations: Sequence[Sequence] = (),
    n: int | None = None,
) -> ConeRep:
    """Complete a partial cone description to both canonical representations.

    Args:
        rays: generators (V-representation), or None.
        facets: inequality normals a (a.x >= 0), or None.
        lineality: extra generators of a linear subspace (with rays).
        equations: normals e with e.x = 0 (with facets).
        n: ambient dimension when it cannot be read off the data.

    Raises:
        RepresentationMismatch: both representations were given and disagree.
    """
    if rays is None and facets is None:
        raise ValueError("at least one representation is required")
    from_v = cone_from_rays(rays, lineality, n) if rays is not None else None
    from_h = cone_from_facets(facets, equations, n) if facets is not None else None
    if from_v is not None and from_h is not None:
        if from_v != from_h:
            raise RepresentationMismatch("V- and H-representations describe different cones")
    return from_v if from_v is not None else from_h

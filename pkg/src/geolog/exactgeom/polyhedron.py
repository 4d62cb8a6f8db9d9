"""Exact convex polyhedra with open, closed and equality constraints."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .cone import Halfspace, vrep_from_hrep
from .linalg import dot, is_zero, primitive, project_out, qvec, rank, row_space_basis, to_q


class DimensionMismatch(ValueError):
    pass


def _canon_point(p: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in p)


class Polyhedron:
    """Intersection of finitely many halfspaces in Q^n.

    Halfspaces may be closed (a.x >= b), open (a.x > b) or equalities (a.x = b).
    Generators (vertices, recession rays, lineality) always describe the
    closure; strictness only matters for emptiness, membership and the
    relative interior.

    Args:
        n: ambient dimension.
        halfspaces: the constraints.
    """

    def __init__(self, n: int, halfspaces: Iterable[Halfspace] = ()):
        self.n = n
        hs = []
        seen = set()
        for h in halfspaces:
            if len(h.normal) != n:
                raise DimensionMismatch(f"halfspace of dimension {len(h.normal)} in ambient {n}")
            key = h.canonical()
            if key not in seen:
                seen.add(key)
                hs.append(h)
        self.halfspaces: tuple[Halfspace, ...] = tuple(sorted(hs, key=lambda h: h.canonical()))

    # -- construction helpers -------------------------------------------------
    @classmethod
    def cube(cls, m: int) -> "Polyhedron":
        hs = []
        for i in range(m):
            e = tuple(1 if j == i else 0 for j in range(m))
            hs.append(Halfspace(e, 0, "closed"))
            hs.append(Halfspace(tuple(-x for x in e), -1, "closed"))
        return cls(m, hs)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        m = len(lo)
        hs = []
        for i in range(m):
            e = tuple(1 if j == i else 0 for j in range(m))
            hs.append(Halfspace(e, lo[i], "closed"))
            hs.append(Halfspace(tuple(-x for x in e), -to_q(hi[i]), "closed"))
        return cls(m, hs)

    @classmethod
    def from_generators(cls, vertices: Sequence[Sequence], rays: Sequence[Sequence] = (), lineality: Sequence[Sequence] = (), n: int | None = None) -> "Polyhedron":
        """Closed polyhedron conv(vertices) + cone(rays) + span(lineality)."""
        if n is None:
            n = len(vertices[0])
        if not vertices:
            return cls(n, [Halfspace((1,) + (0,) * (n - 1), 1, "equal"), Halfspace((1,) + (0,) * (n - 1), 0, "equal")]) if n else cls(0)
        gens = [tuple(qvec(v)) + (Fraction(1),) for v in vertices]
        gens += [tuple(qvec(r)) + (Fraction(0),) for r in rays]
        lin = [tuple(qvec(l)) + (Fraction(0),) for l in lineality]
        facets, eqs = vrep_from_hrep(
            [primitive(g) for g in gens] + [primitive(l) for l in lin] + [primitive(tuple(-x for x in l)) for l in lin],
            [],
            n + 1,
        )
        hs = []
        for f in facets:
            if is_zero(f[:n]):
                continue  # the homogenizing constraint t >= 0
            hs.append(Halfspace(f[:n], -f[n], "closed"))
        for e in eqs:
            if is_zero(e[:n]):
                continue
            hs.append(Halfspace(e[:n], -e[n], "equal"))
        return cls(n, hs)

    # -- basic structure --------------------------------------------------------
    def closure(self) -> "Polyhedron":
        return Polyhedron(self.n, [h.closed() for h in self.halfspaces])

    def intersect(self, other: "Polyhedron | Iterable[Halfspace]") -> "Polyhedron":
        if isinstance(other, Polyhedron):
            if other.n != self.n:
                raise DimensionMismatch(f"ambient dimensions {self.n} and {other.n} differ")
            return Polyhedron(self.n, self.halfspaces + other.halfspaces)
        return Polyhedron(self.n, list(self.halfspaces) + list(other))

    @cached_property
    def _generators(self):
        n = self.n
        ineqs = []
        eqs = []
        for h in self.halfspaces:
            row = tuple(h.normal) + (-h.offset,)
            if h.kind == "equal":
                eqs.append(primitive(row))
            else:
                ineqs.append(primitive(row))
        ineqs.append(tuple(0 for _ in range(n)) + (1,))
        rays, lin = vrep_from_hrep(ineqs, eqs, n + 1)
        verts = []
        recs = []
        for r in rays:
            if r[n] > 0:
                verts.append(tuple(Fraction(x, r[n]) for x in r[:n]))
            else:
                recs.append(tuple(r[:n]))
        lins = [tuple(l[:n]) for l in lin]
        # rays were canonical modulo the (n+1)-lineality whose last coordinate is 0
        return sorted(set(verts)), sorted(set(recs)), lins

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        return self._generators[0]

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return self._generators[1]

    @property
    def lineality(self) -> list[tuple[int, ...]]:
        return self._generators[2]

    @cached_property
    def closure_empty(self) -> bool:
        return not self.vertices

    @cached_property
    def is_empty(self) -> bool:
        if self.closure_empty:
            return True
        for h in self.halfspaces:
            if h.kind == "open" and self._tight_everywhere(h):
                return True
        return False

    def _tight_everywhere(self, h: Halfspace) -> bool:
        return (
            all(h.value(v) == 0 for v in self.vertices)
            and all(dot(h.normal, r) == 0 for r in self.rays)
            and all(dot(h.normal, l) == 0 for l in self.lineality)
        )

    @cached_property
    def dim(self) -> int:
        """Dimension of the affine hull (-1 when empty)."""
        if self.is_empty:
            return -1
        v0 = self.vertices[0]
        dirs = [tuple(a - b for a, b in zip(v, v0)) for v in self.vertices[1:]]
        dirs += [tuple(Fraction(x) for x in r) for r in self.rays]
        dirs += [tuple(Fraction(x) for x in l) for l in self.lineality]
        return rank(dirs) if dirs else 0

    @cached_property
    def affine_span_equations(self) -> list[Halfspace]:
        """Equations a.x = b cutting out the affine hull of the closure."""
        if self.closure_empty:
            return []
        v0 = self.vertices[0]
        dirs = [tuple(a - b for a, b in zip(v, v0)) for v in self.vertices[1:]]
        dirs += [tuple(Fraction(x) for x in r) for r in self.rays]
        dirs += [tuple(Fraction(x) for x in l) for l in self.lineality]
        from .linalg import orth_complement

        normals = orth_complement([d for d in dirs if not is_zero(d)], self.n)
        return [Halfspace(a, dot(a, v0), "equal") for a in normals]

    def relint_point(self) -> tuple[Fraction, ...]:
        if self.closure_empty:
            raise ValueError("empty polyhedron has no points")
        k = len(self.vertices)
        p = [sum((v[i] for v in self.vertices), Fraction(0)) / k for i in range(self.n)]
        for r in self.rays:
            p = [a + b for a, b in zip(p, r)]
        return tuple(p)

    def contains(self, x: Sequence) -> bool:
        return all(h.contains(x) for h in self.halfspaces)

    def contains_closure(self, x: Sequence) -> bool:
        return all(h.closed().contains(x) for h in self.halfspaces)

    def in_relint(self, x: Sequence) -> bool:
        """Membership in the relative interior of the closure."""
        if not self.contains_closure(x):
            return False
        for f in self.facets:
            if f.value(x) == 0:
                return False
        return True

    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    # -- faces -----------------------------------------------------------------
    def _gen_list(self):
        gens = [("v", v) for v in self.vertices] + [("r", r) for r in self.rays]
        return gens

    def _tight_mask(self, h: Halfspace) -> int:
        m = 0
        for i, (kind, g) in enumerate(self._gen_list()):
            val = h.value(g) if kind == "v" else dot(h.normal, g)
            if val == 0:
                m |= 1 << i
        return m

    @cached_property
    def _facet_data(self):
        """Irredundant facet inequalities of the closure with their generator masks."""
        if self.closure_empty:
            return []
        d = self.dim
        if d <= 0:
            return []
        gens = self._gen_list()
        full = (1 << len(gens)) - 1
        cand = {}
        for h in self.halfspaces:
            if h.kind == "equal":
                continue
            hc = h.closed()
            if all(dot(h.normal, l) == 0 for l in self.lineality):
                mask = self._tight_mask(hc)
                if mask == full:
                    continue  # implicit equality
                if mask not in cand:
                    cand[mask] = hc
        out = []
        for mask, h in cand.items():
            if self._mask_dim(mask) == d - 1:
                out.append((mask, h))
        # canonical representative per facet: normal projected off the affine span
        eqs = [tuple(e.normal) for e in self.affine_span_equations]
        res = []
        for mask, h in out:
            nrm = project_out(h.normal, eqs) if eqs else h.normal
            g = next(g for i, (k, g) in enumerate(gens) if (mask >> i) & 1 and k == "v")
            res.append((mask, Halfspace(primitive(nrm), dot(primitive(nrm), g), "closed")))
        res.sort(key=lambda t: t[1].canonical())
        return res

    def _mask_dim(self, mask: int) -> int:
        gens = self._gen_list()
        verts = [g for i, (k, g) in enumerate(gens) if (mask >> i) & 1 and k == "v"]
        rays = [g for i, (k, g) in enumerate(gens) if (mask >> i) & 1 and k == "r"]
        if not verts:
            return -1
        dirs = [tuple(a - b for a, b in zip(v, verts[0])) for v in verts[1:]]
        dirs += [tuple(Fraction(x) for x in r) for r in rays]
        dirs += [tuple(Fraction(x) for x in l) for l in self.lineality]
        return rank(dirs) if dirs else 0

    @property
    def facets(self) -> list[Halfspace]:
        return [h for _, h in self._facet_data]

    def _face_from_mask(self, mask: int) -> "Polyhedron":
        gens = self._gen_list()
        verts = [g for i, (k, g) in enumerate(gens) if (mask >> i) & 1 and k == "v"]
        rays = [g for i, (k, g) in enumerate(gens) if (mask >> i) & 1 and k == "r"]
        return Polyhedron.from_generators(verts, rays, self.lineality, n=self.n)

    def face_masks(self) -> list[int]:
        """Generator masks of all nonempty faces of the closure (including itself)."""
        if self.closure_empty:
            return []
        full = (1 << len(self._gen_list())) - 1
        facet_masks = [m for m, _ in self._facet_data]
        seen = {full}
        frontier = [full]
        while frontier:
            nxt = []
            for m in frontier:
                for fm in facet_masks:
                    g = m & fm
                    if g not in seen and self._has_vertex(g):
                        seen.add(g)
                        nxt.append(g)
            frontier = nxt
        return sorted(seen, key=lambda m: (-self._mask_dim(m), m))

    def _has_vertex(self, mask: int) -> bool:
        gens = self._gen_list()
        return any((mask >> i) & 1 and k == "v" for i, (k, _) in enumerate(gens))

    def faces(self, dim: int | None = None) -> list["Polyhedron"]:
        out = []
        for m in self.face_masks():
            if dim is None or self._mask_dim(m) == dim:
                out.append(self._face_from_mask(m))
        return out

    def facet_polyhedra(self) -> list["Polyhedron"]:
        return [self.closure().intersect([Halfspace(h.normal, h.offset, "equal")]) for h in self.facets]

    def ridges(self) -> list["Polyhedron"]:
        return self.faces(self.dim - 2) if self.dim >= 2 else []

    # -- comparisons -----------------------------------------------------------
    def key(self) -> tuple:
        """Canonical key of the closure (generators)."""
        if self.closure_empty:
            return ("empty", self.n)
        lin = row_space_basis(self.lineality) if self.lineality else []
        rays = sorted({primitive(project_out(r, lin)) for r in self.rays} - {tuple(0 for _ in range(self.n))})
        verts = sorted({tuple(project_out(v, lin)) for v in self.vertices}) if lin else self.vertices
        return (self.n, tuple(verts), tuple(rays), tuple(lin))

    def same_closure(self, other: "Polyhedron") -> bool:
        return self.key() == other.key()

    def is_face_of(self, other: "Polyhedron") -> bool:
        """True when the closure of self is a face of the closure of other."""
        if self.closure_empty or other.closure_empty:
            return False
        q = self.relint_point()
        if not other.contains_closure(q):
            return False
        tight = [h for h in other.facets if h.value(q) == 0]
        face = other.closure().intersect([Halfspace(h.normal, h.offset, "equal") for h in tight])
        return face.key() == self.key()

    def __repr__(self):
        if self.is_empty:
            return f"Polyhedron(n={self.n}, empty)"
        return f"Polyhedron(n={self.n}, dim={self.dim}, vertices={[tuple(str(x) for x in v) for v in self.vertices]})"


def intersect_and_faces(p: Polyhedron, q: Polyhedron) -> dict:
    """Intersection of two polyhedra with its dimension, facets and ridges.

    Returns:
        dict with keys "polyhedron", "empty", "dim", "facets", "ridges", "vertices".
    """
    if p.n != q.n:
        raise DimensionMismatch(f"ambient dimensions {p.n} and {q.n} differ")
    r = p.intersect(q)
    if r.is_empty:
        return {"polyhedron": r, "empty": True, "dim": -1, "facets": [], "ridges": [], "vertices": []}
    return {
        "polyhedron": r,
        "empty": False,
        "dim": r.dim,
        "facets": r.facets,
        "ridges": r.ridges(),
        "vertices": r.vertices,
    }

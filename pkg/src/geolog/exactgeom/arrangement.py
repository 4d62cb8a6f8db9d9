"""Sign-vector cells of a hyperplane arrangement restricted to a polyhedral region."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .cone import Halfspace
from .linalg import dot, primitive, qvec
from .polyhedron import Polyhedron


def wall_key(h: Halfspace) -> tuple:
    """Orientation-free key of the hyperplane {normal.x = offset}."""
    p = primitive(tuple(h.normal) + (h.offset,))
    lead = next(x for x in p[:-1] if x != 0)
    return p if lead > 0 else tuple(-x for x in p)


def as_wall(w) -> Halfspace:
    if isinstance(w, Halfspace):
        return Halfspace(w.normal, w.offset, "closed")
    normal, offset = w
    return Halfspace(qvec(normal), offset, "closed")


@dataclass
class Cell:
    """A relatively open cell: the relative interior of ``closure``.

    ``signs`` lists the sign (-1, 0, 1) of every region facet and every wall.
    """

    signs: tuple[int, ...]
    closure: Polyhedron
    point: tuple[Fraction, ...]
    dim: int
    plus: int = 0
    minus: int = 0

    def __post_init__(self):
        p = m = 0
        for i, s in enumerate(self.signs):
            if s > 0:
                p |= 1 << i
            elif s < 0:
                m |= 1 << i
        self.plus, self.minus = p, m

    def in_closure_of(self, other: "Cell") -> bool:
        """Sign-vector incidence: self lies in the closure of other."""
        return (self.plus & ~other.plus) == 0 and (self.minus & ~other.minus) == 0


def _split_sign(poly: Polyhedron, w: Halfspace) -> int | None:
    """Sign of w on the relative interior of poly, or None when w cuts it."""
    pos = neg = False
    for v in poly.vertices:
        x = w.value(v)
        pos |= x > 0
        neg |= x < 0
    for r in poly.rays:
        x = dot(w.normal, r)
        pos |= x > 0
        neg |= x < 0
    for l in poly.lineality:
        if dot(w.normal, l) != 0:
            return None
    if pos and neg:
        return None
    return 1 if pos else (-1 if neg else 0)


class ChamberComplex:
    """Cells of an arrangement of walls inside a closed region.

    The region is first decomposed into its relatively open faces, then every
    wall splits the cells it crosses. Cells are pairwise disjoint and cover
    the region.

    Args:
        region: a closed polyhedron.
        walls: hyperplanes, as Halfspace (normal.x = offset) or (normal, offset) pairs.
    """

    def __init__(self, region: Polyhedron, walls: Iterable = ()):
        self.region = region.closure()
        self.region_facets: list[Halfspace] = list(self.region.facets)
        self.walls: list[Halfspace] = []
        self._wall_keys: set = set()
        self.cells: list[Cell] = self._face_cells()
        self._adj_cache: dict | None = None
        self.refine(walls)

    def _face_cells(self) -> list[Cell]:
        if self.region.is_empty:
            return []
        cells = []
        for mask in self.region.face_masks():
            face = self.region._face_from_mask(mask)
            q = face.relint_point()
            signs = tuple(0 if h.value(q) == 0 else 1 for h in self.region_facets)
            cells.append(Cell(signs, face, q, face.dim))
        return cells

    @property
    def n(self) -> int:
        return self.region.n

    def refine(self, walls: Iterable) -> list[int]:
        """Add walls; returns the indices (into self.walls) of the walls actually added."""
        added = []
        for w in walls:
            h = as_wall(w)
            k = wall_key(h)
            if k in self._wall_keys:
                continue
            self._wall_keys.add(k)
            self.walls.append(h)
            added.append(len(self.walls) - 1)
            new_cells = []
            for c in self.cells:
                s = _split_sign(c.closure, h)
                if s is not None:
                    new_cells.append(Cell(c.signs + (s,), c.closure, c.point, c.dim))
                    continue
                for sgn, kind, hh in (
                    (1, "closed", h),
                    (0, "equal", h),
                    (-1, "closed", Halfspace(tuple(-x for x in h.normal), -h.offset, "closed")),
                ):
                    piece = c.closure.intersect([Halfspace(hh.normal, hh.offset, kind)])
                    q = piece.relint_point()
                    new_cells.append(Cell(c.signs + (sgn,), piece, q, piece.dim))
            self.cells = new_cells
        if added:
            self._adj_cache = None
        self.cells.sort(key=lambda c: (-c.dim, c.signs))
        return added

    def sign_vector(self, x: Sequence) -> tuple[int, ...]:
        out = []
        for h in self.region_facets + self.walls:
            v = h.value(x)
            out.append((v > 0) - (v < 0))
        return tuple(out)

    def locate(self, x: Sequence) -> int:
        """Index of the cell containing x (x must lie in the region)."""
        if not self.region.contains(x):
            raise ValueError("point outside the region")
        s = self.sign_vector(x)
        for i, c in enumerate(self.cells):
            if c.signs == s:
                return i
        raise AssertionError("sign vector not realized by any cell")

    def cells_of_dim(self, d: int) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == d]

    def incidence(self, i: int) -> list[int]:
        """Cells whose closure contains cell i (excluding i itself)."""
        ci = self.cells[i]
        return [j for j, c in enumerate(self.cells) if j != i and ci.in_closure_of(c)]

    def boundary_cells(self, i: int) -> list[int]:
        """Cells contained in the closure of cell i (excluding i itself)."""
        ci = self.cells[i]
        return [j for j, c in enumerate(self.cells) if j != i and c.in_closure_of(ci)]

    @property
    def adjacency(self) -> dict[int, list[int]]:
        """Cells of equal dimension sharing a common facet cell."""
        if self._adj_cache is None:
            adj: dict[int, set] = {i: set() for i in range(len(self.cells))}
            by_dim: dict[int, list[int]] = {}
            for i, c in enumerate(self.cells):
                by_dim.setdefault(c.dim, []).append(i)
            for d, ids in by_dim.items():
                lower = by_dim.get(d - 1, [])
                for f in lower:
                    cf = self.cells[f]
                    ups = [i for i in ids if cf.in_closure_of(self.cells[i])]
                    for a in ups:
                        for b in ups:
                            if a != b:
                                adj[a].add(b)
            self._adj_cache = {i: sorted(s) for i, s in adj.items()}
        return self._adj_cache

    def merged(self, payload: Sequence[Hashable] | Callable[[Cell], Hashable] | None = None) -> "MergedComplex":
        """Group cells with equal payload.

        Args:
            payload: one hashable value per cell, a function of the cell, or
                None to group by the sign vector on the walls alone (region
                faces are then ignored).
        """
        if payload is None:
            nreg = len(self.region_facets)
            values = [c.signs[nreg:] for c in self.cells]
        elif callable(payload):
            values = [payload(c) for c in self.cells]
        else:
            values = list(payload)
        return MergedComplex(self, values)


@dataclass
class MergedCell:
    payload: Hashable
    members: list[int]
    closure: Polyhedron
    dim: int
    point: tuple[Fraction, ...]


class MergedComplex:
    """Payload classes of a chamber complex (each class a union of cells)."""

    def __init__(self, base: ChamberComplex, values: Sequence[Hashable]):
        self.base = base
        groups: dict = {}
        order = []
        for i, v in enumerate(values):
            if v not in groups:
                groups[v] = []
                order.append(v)
            groups[v].append(i)
        self.cells: list[MergedCell] = []
        self.cell_of: dict[int, int] = {}
        for v in order:
            members = groups[v]
            verts, rays, lins = [], [], []
            for i in members:
                cl = base.cells[i].closure
                verts += cl.vertices
                rays += cl.rays
                lins += cl.lineality
            hull = Polyhedron.from_generators(sorted(set(verts)), sorted(set(rays)), lins, n=base.n)
            top = max(members, key=lambda i: base.cells[i].dim)
            self.cells.append(MergedCell(v, members, hull, base.cells[top].dim, base.cells[top].point))
        self.cells.sort(key=lambda m: (-m.dim, m.point))
        for k, m in enumerate(self.cells):
            for i in m.members:
                self.cell_of[i] = k

    def __len__(self):
        return len(self.cells)

    def locate(self, x: Sequence) -> int:
        return self.cell_of[self.base.locate(x)]

    def contains(self, k: int, x: Sequence) -> bool:
        try:
            return self.locate(x) == k
        except ValueError:
            return False


def arrangement_chambers(region: Polyhedron, walls: Iterable = ()) -> ChamberComplex:
    """Decompose region into the sign-vector cells of the given walls."""
    return ChamberComplex(region, walls)

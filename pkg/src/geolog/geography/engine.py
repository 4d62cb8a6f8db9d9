"""Chamber decomposition of the boundary cube by the tracked invariants.

The cube is cut by the walls of the pseudo-effective region and by the walls
of the charts (one per Q-factorial model met by the MMP). Every cell inside
the region is covered by some chart, on which e and p are affine, so the
sign pattern of (e, p) is constant on each cell. Cells with the same pattern
are merged into the classes of the geography.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactgeom.arrangement import ChamberComplex
from ..exactgeom.cone import Halfspace
from ..exactgeom.polyhedron import Polyhedron
from .affine import Affine, Param
from .toric_backend import Payload


def threads() -> int:
    """Worker count from GEOLOG_THREADS (the exact engine itself is sequential)."""
    try:
        return max(1, int(os.environ.get("GEOLOG_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class GeographyClass:
    """One class: a relatively open convex set of boundaries with a common sign pattern."""

    index: int
    payload: Payload
    members: list[int]
    closure: Polyhedron
    dim: int
    point: tuple[Fraction, ...]
    model: tuple | None = None
    wlc_models: tuple = ()
    nu: int | float = float("-inf")

    @property
    def signature(self) -> tuple:
        return self.payload.signature

    @property
    def inside(self) -> bool:
        return self.payload.inside

    @property
    def lc(self):
        return self.payload.lc

    @property
    def fix(self) -> tuple:
        return self.payload.signature[0] if self.inside else ("outside",)


class Geography:
    """The classes of a geography over a region of parameters t with b = param.b(t)."""

    def __init__(self, backend, param: Param, region: Polyhedron, complex_: ChamberComplex, charts: dict):
        self.backend = backend
        self.param = param
        self.region = region
        self.complex = complex_
        self.charts = charts
        self.ns_affines = [param.pull(f) for f in backend.ns_affines()]
        cells = complex_.cells
        self.cell_payload: list[Payload] = []
        self.cell_charts: list[tuple] = []
        for c in cells:
            b = param.b(c.point)
            if not self.in_ns(c.point):
                self.cell_payload.append(Payload(False))
                self.cell_charts.append(())
                continue
            cov = [ch for ch in charts.values() if ch.covers(b)]
            if not cov:
                raise AssertionError(f"cell at {b} is not covered by any chart")
            rep = self._representative(cov)
            self.cell_payload.append(rep.payload(b))
            self.cell_charts.append(tuple(sorted(ch.key for ch in cov)) + (("rep", rep.key),))
        merged = complex_.merged([p.signature for p in self.cell_payload])
        self.merged = merged
        self.classes: list[GeographyClass] = []
        for k, mc in enumerate(merged.cells):
            top = max(mc.members, key=lambda i: cells[i].dim)
            pay = self.cell_payload[top]
            cov = self.cell_charts[top]
            model = cov[-1][1] if cov else None
            wlc = tuple(x for x in cov[:-1]) if cov else ()
            self.classes.append(GeographyClass(k, pay, mc.members, mc.closure, mc.dim, mc.point, model, wlc, pay.nu))

    @staticmethod
    def _representative(cov):
        return min(cov, key=lambda ch: (-ch.size, ch.key))

    # -- queries --------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.param.k

    def in_ns(self, t) -> bool:
        return all(f(t) >= 0 for f in self.ns_affines)

    def locate(self, t) -> int:
        return self.merged.locate(tuple(Fraction(x) for x in t))

    def class_at(self, t) -> GeographyClass:
        return self.classes[self.locate(t)]

    def classes_of_dim(self, d: int) -> list[GeographyClass]:
        return [c for c in self.classes if c.dim == d]

    @property
    def inside_classes(self) -> list[GeographyClass]:
        return [c for c in self.classes if c.inside]

    def charts_at_b(self, b) -> list:
        return [ch for ch in self.charts.values() if ch.covers(b)]

    def payload_at(self, t) -> Payload:
        """Chart route at an arbitrary parameter point."""
        b = self.param.b(t)
        if not self.in_ns(t):
            return Payload(False)
        cov = self.charts_at_b(b)
        if not cov:
            ch = self.backend.chart_at(b)
            if ch is None:
                return Payload(False)
            cov = [ch]
        return self._representative(cov).payload(b)

    def model_at(self, t):
        cov = self.charts_at_b(self.param.b(t))
        return self._representative(cov).key if cov else None

    def wlc_models_at(self, t) -> tuple:
        return tuple(sorted(ch.key for ch in self.charts_at_b(self.param.b(t))))

    def separatrix_classes(self) -> list[GeographyClass]:
        """Inside classes on the boundary of the pseudo-effective region."""
        out = []
        for c in self.inside_classes:
            if any(f(c.point) == 0 and not f.is_const for f in self.ns_affines):
                out.append(c)
        return out

    def closure_contains(self, big: GeographyClass, small: GeographyClass) -> bool:
        cells = self.complex.cells
        s = cells[small.members[0]]
        return any(s.in_closure_of(cells[i]) for i in big.members)

    def neighbours(self, c: GeographyClass) -> list[GeographyClass]:
        """Classes of one dimension lower in the closure of c."""
        return [o for o in self.classes if o.dim == c.dim - 1 and self.closure_contains(c, o)]

    def cofaces(self, c: GeographyClass) -> list[GeographyClass]:
        """Classes of one dimension higher whose closure contains c."""
        return [o for o in self.classes if o.dim == c.dim + 1 and self.closure_contains(o, c)]

    def summary(self) -> dict:
        return {
            "dim": self.dim,
            "classes": len(self.classes),
            "inside": len(self.inside_classes),
            "models": sorted({repr(c.model) for c in self.inside_classes}),
        }


def slice_region(param: Param, region: Polyhedron | None = None, cube: bool = True) -> Polyhedron:
    """Parameters t with b(t) in the unit cube, intersected with ``region``."""
    k = param.k
    if not cube:
        if region is None:
            raise ValueError("a region is needed off the cube")
        return region
    hs = []
    for i in range(param.m):
        f = param.pull(Affine.coord(param.m, i))
        g = param.pull(Affine.coord(param.m, i, -1, 1))
        for h in (f, g):
            if h.is_const:
                if h.c < 0:
                    return Polyhedron(k, [Halfspace((1,) * k, 1, "closed"), Halfspace((-1,) * k, 0, "closed")])
                continue
            hs.append(Halfspace(h.a, -h.c, "closed"))
    P = Polyhedron(k, hs)
    if region is not None:
        P = P.intersect(region)
    return P


def _walls(fs: Sequence[Affine]) -> list[Halfspace]:
    return [w for w in (f.wall() for f in fs) if w is not None]


def compute_geography(
    backend, param: Param | None = None, region: Polyhedron | None = None, cube: bool = True, max_rounds: int = 1000
) -> Geography:
    """Cover the region by charts and return the merged classes.

    Args:
        backend: a toric or surface backend.
        param: affine slice t -> b; the identity on the cube by default.
        region: extra constraints on t (a box around a ridge, say).
        cube: whether b(t) is confined to the unit cube.
    """
    param = param or Param.identity(backend.m)
    R = slice_region(param, region, cube)
    ns = [param.pull(f) for f in backend.ns_affines()]
    cc = ChamberComplex(R, _walls(ns))
    charts: dict = {}

    def pull_all(fs):
        return [param.pull(f) for f in fs]

    def covered(b):
        return any(ch.covers(b) for ch in charts.values())

    for _ in range(max_rounds):
        new = None
        for c in cc.cells:
            if not all(f(c.point) >= 0 for f in ns):
                continue
            b = param.b(c.point)
            if covered(b):
                continue
            ch = backend.chart_at(b)
            if ch is None:
                raise AssertionError(f"no wlc model at {b} inside the pseudo-effective region")
            if ch.key in charts:
                raise AssertionError(f"chart {ch.key} does not cover its own MMP output at {b}")
            new = ch
            break
        if new is None:
            break
        charts[new.key] = new
        cc.refine(_walls(pull_all(new.domain)))
    else:
        raise RuntimeError("geography cover did not converge")
    backend.finalize(list(charts.values()))
    extra = backend.extra_divisors()
    if extra:
        ws = []
        for ch in charts.values():
            ws += _walls(pull_all(ch.e(v) for v in extra))
        cc.refine(ws)
    return Geography(backend, param, R, cc, charts)

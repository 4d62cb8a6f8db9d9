"""Facet and ridge types of a geography.

Facets (codimension one classes) are cube bordering, fibering, divisorial or
flopping. Ridges (codimension two) are cube bordering, fibering of type
2A/2B/2C or birational of type 3A/3B/3C. Every tag carries witnesses; when
the generality conditions hold a witness that fails validation raises
ClassificationInconsistency, otherwise the tag is kept but marked unverified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from ..exactgeom.linalg import rank
from ..exactgeom.polyhedron import Polyhedron
from .affine import Param
from .engine import Geography, GeographyClass, compute_geography


class ClassificationInconsistency(RuntimeError):
    """A tag whose witnesses fail validation although generality holds."""


@dataclass
class FacetTag:
    kind: str  # CubeBordering | Fibering | Divisorial | Flopping
    facet: int
    countries: tuple[int, ...] = ()
    validated: bool = True
    reason: str = ""
    witnesses: dict = field(default_factory=dict)


@dataclass
class RidgeTag:
    kind: str  # CubeBordering | Fib2A | Fib2B | Fib2C | Bir3A | Bir3B | Bir3C
    ridge: int
    facets: tuple = ()  # facet tags F_1..F_{m+1} in order (local slice)
    countries: tuple = ()  # representative models of C_1..C_m
    m: int = 0
    validated: bool = True
    reason: str = ""
    witnesses: dict = field(default_factory=dict)


def generality(g: Geography) -> tuple[bool, str]:
    """Whether the components span N^1 and the pair is of general type."""
    be = g.backend
    cls = [c for c in be.component_classes() if c]
    if be.rho and (not cls or rank(cls) < be.rho):
        return False, f"components span rank {rank(cls) if cls else 0} < rho = {be.rho}"
    ones = tuple(Fraction(1) for _ in range(be.m))
    pay = _payload_at_b(g, ones)
    if not pay.inside or pay.nu != be.max_nu:
        return False, "the pair is not of general type"
    return True, ""


def _payload_at_b(g: Geography, b):
    be = g.backend
    if not all(f(b) >= 0 for f in be.ns_affines()):
        from .toric_backend import Payload

        return Payload(False)
    ch = be.chart_at(b)
    return ch.payload(b)


def _in_region_boundary(g: Geography, c: GeographyClass) -> bool:
    nreg = len(g.complex.region_facets)
    cell = g.complex.cells[c.members[0]]
    return any(s == 0 for s in cell.signs[:nreg])


def _e_signs(c: GeographyClass) -> tuple:
    return c.signature[0]


def _validate(ok: bool, general: bool, why: str, tag) -> None:
    if ok:
        return
    if general:
        raise ClassificationInconsistency(why)
    tag.validated = False
    tag.reason = (tag.reason + "; " if tag.reason else "") + why


def classify_facet(g: Geography, F: GeographyClass, general: tuple[bool, str] | None = None) -> FacetTag:
    """Tag a codimension one inside class of g."""
    if F.dim != g.dim - 1 or not F.inside:
        raise ValueError("not an inside facet class")
    gen, why = general if general is not None else generality(g)
    if _in_region_boundary(g, F):
        return FacetTag("CubeBordering", F.index)
    cof = g.cofaces(F)
    inside = [c for c in cof if c.inside]
    outside = [c for c in cof if not c.inside]
    if outside:
        tag = FacetTag("Fibering", F.index, tuple(c.index for c in inside))
        if not gen:
            tag.validated, tag.reason = False, why
        b = g.param.b(F.point)
        bo = g.param.b(outside[0].point)
        near = tuple(x + (y - x) / 64 for x, y in zip(b, bo))
        fib = g.backend.fibration_at(near)
        tag.witnesses = {"fibration": fib, "wlc_models": F.wlc_models}
        _validate(fib is not None and fib[0] in F.wlc_models, gen, "no Mori fibration from a wlc model of the facet", tag)
        _validate(len(inside) == 1, gen, "a fibering facet needs exactly one adjacent country", tag)
        return tag
    if len(inside) != 2:
        raise ClassificationInconsistency(f"internal facet with {len(inside)} adjacent countries")
    c1, c2 = inside
    ch1, ch2 = g.charts[c1.model], g.charts[c2.model]
    if _e_signs(c1) != _e_signs(c2):
        be = g.backend
        big, small = (ch1, ch2) if ch1.size > ch2.size else (ch2, ch1)
        lost = be.divisorial_between(big, small)
        changed = [i for i, (x, y) in enumerate(zip(_e_signs(c1), _e_signs(c2))) if x != y]
        tag = FacetTag("Divisorial", F.index, (c1.index, c2.index))
        if not gen:
            tag.validated, tag.reason = False, why
        tag.witnesses = {
            "models": (big.key, small.key),
            "divisors": tuple(be.divisors[i] for i in changed),
            "contracted": lost,
            "wlc_models": F.wlc_models,
        }
        _validate(lost is not None, gen, "adjacent models are not related by an elementary divisorial contraction", tag)
        _validate(len(F.wlc_models) == 2, gen, f"divisorial facet with {len(F.wlc_models)} Q-factorial wlc models", tag)
        return tag
    tag = FacetTag("Flopping", F.index, (c1.index, c2.index))
    if not gen:
        tag.validated, tag.reason = False, why
    tag.witnesses = {"models": (ch1.key, ch2.key), "wlc_models": F.wlc_models}
    _validate(g.backend.flop_between(ch1, ch2), gen, "adjacent models are not related by a flop", tag)
    return tag


def classify_facets(g: Geography) -> list[FacetTag]:
    gen = generality(g)
    return [classify_facet(g, F, gen) for F in g.classes if F.inside and F.dim == g.dim - 1]


# -- ridges ---------------------------------------------------------------------------


def _angle_cmp(p, q) -> int:
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    hp, hq = half(p), half(q)
    if hp != hq:
        return hp - hq
    cross = p[0] * q[1] - p[1] * q[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _local_slice(g: Geography, R: GeographyClass) -> tuple[Geography, GeographyClass]:
    """A 2D geography transverse to R in a box small enough to see only R's star."""
    if g.dim == 2:
        return g, R
    eqs = R.closure.affine_span_equations
    normals = [h.normal for h in eqs]
    basis: list = []
    for n in normals:
        if rank(basis + [n]) > len(basis):
            basis.append(n)
    if len(basis) != 2:
        raise ValueError("ridge is not of codimension two")
    b0 = g.param.b(R.point)
    cols = [tuple(sum((n[k] * col[i] for k, col in enumerate(g.param.cols)), Fraction(0)) for i in range(g.param.m)) for n in basis]
    loc = isolate_vertex(g.backend, Param.make(b0, cols))
    if loc is None:
        raise RuntimeError("could not isolate the ridge in a transverse slice")
    return loc


def isolate_vertex(backend, par: Param, eps=Fraction(1, 8), tries: int = 24) -> tuple[Geography, GeographyClass] | None:
    """Shrink a box around t = 0 of a 2D slice until only the star of the origin is seen.

    Returns None when the origin is not a vertex of the slice geography.
    """
    origin = (Fraction(0), Fraction(0))
    for _ in range(tries):
        box = Polyhedron.box((-eps, -eps), (eps, eps))
        loc = compute_geography(backend, par, box)
        r = loc.class_at(origin)
        if r.dim > 0 and all(loc.closure_contains(c, r) for c in loc.classes if c.dim >= r.dim):
            return None
        ok = r.dim == 0 and all(
            loc.closure_contains(c, r) for c in loc.classes if c.dim == 2 or (c.dim == 1 and not _in_region_boundary(loc, c))
        )
        if ok:
            return loc, r
        eps /= 4
    return None


def _star(loc: Geography, r: GeographyClass) -> list[GeographyClass]:
    """Facets and countries around the vertex r in counterclockwise order."""
    items = [c for c in loc.classes if c.dim in (1, 2) and loc.closure_contains(c, r)]
    p0 = r.point

    def direction(c):
        return tuple(x - y for x, y in zip(c.point, p0))

    return sorted(items, key=cmp_to_key(lambda a, b: _angle_cmp(direction(a), direction(b)) or (a.dim - b.dim)))


def classify_ridge(g: Geography, R: GeographyClass, general: tuple[bool, str] | None = None) -> RidgeTag:
    if R.dim != g.dim - 2 or not R.inside:
        raise ValueError("not an inside ridge class")
    gen, why = general if general is not None else generality(g)
    if _in_region_boundary(g, R):
        return RidgeTag("CubeBordering", R.index)
    loc, r = _local_slice(g, R)
    star = _star(loc, r)
    if any(_in_region_boundary(loc, c) for c in star):
        return RidgeTag("CubeBordering", R.index)
    T = r.lc
    outside = [i for i, c in enumerate(star) if not c.inside]
    if outside:
        # rotate so the inside arc runs F_1, C_1, ..., C_m, F_{m+1}
        n = len(star)
        start = next(i for i in range(n) if not star[i].inside and star[(i + 1) % n].inside)
        arc = []
        for k in range(1, n + 1):
            c = star[(start + k) % n]
            if not c.inside:
                break
            arc.append(c)
        if len(arc) < 3 or arc[0].dim != 1 or arc[-1].dim != 1:
            raise ClassificationInconsistency("fibering ridge without a facet-country-facet arc")
        facets = [c for c in arc if c.dim == 1]
        countries = [c for c in arc if c.dim == 2]
        ftags = [classify_facet(loc, f, (gen, why)) for f in facets]
        iso1, iso2 = facets[0].lc == T, facets[-1].lc == T
        if iso2 and not iso1:
            facets.reverse()
            countries.reverse()
            ftags.reverse()
            iso1, iso2 = iso2, iso1
        kind = "Fib2C" if iso1 and iso2 else ("Fib2B" if iso1 else "Fib2A")
        m = len(countries)
        tag = RidgeTag(kind, R.index, tuple(ftags), tuple(c.model for c in countries), m)
        if not gen:
            tag.validated, tag.reason = False, why
        tag.witnesses = {
            "T": T,
            "T_ends": (facets[0].lc, facets[-1].lc),
            "fibrations": (ftags[0].witnesses.get("fibration"), ftags[-1].witnesses.get("fibration")),
            "slice": loc,
            "star": tuple(star),
        }
        ends = [t.kind for t in (ftags[0], ftags[-1])]
        inner = [t.kind for t in ftags[1:-1]]
        _validate(ends == ["Fibering", "Fibering"], gen, "arc ends are not fibering facets", tag)
        if kind == "Fib2A":
            _validate(all(k == "Flopping" for k in inner), gen, "2A needs flopping intermediate facets", tag)
        elif kind == "Fib2B":
            _validate(m >= 2 and inner[0] == "Divisorial" and all(k == "Flopping" for k in inner[1:]), gen, "2B needs exactly the first intermediate facet divisorial", tag)
        else:
            _validate(m >= 2 and inner[0] == "Divisorial" and inner[-1] == "Divisorial" and all(k == "Flopping" for k in inner[1:-1]), gen, "2C needs divisorial facets at both ends", tag)
        return tag
    facets = [c for c in star if c.dim == 1]
    countries = [c for c in star if c.dim == 2]
    ftags = [classify_facet(loc, f, (gen, why)) for f in facets]
    sig = [_e_signs(c) for c in countries]
    varying = [i for i in range(len(sig[0])) if len({s[i] for s in sig}) > 1]
    kind = {0: "Bir3A", 1: "Bir3B", 2: "Bir3C"}.get(len(varying))
    if kind is None:
        raise ClassificationInconsistency(f"birational ridge with {len(varying)} moving divisors")
    tag = RidgeTag(kind, R.index, tuple(ftags), tuple(c.model for c in countries), len(countries))
    if not gen:
        tag.validated, tag.reason = False, why
    be = loc.backend
    tag.witnesses = {"T": T, "divisors": tuple(be.divisors[i] for i in varying), "slice": loc, "star": tuple(star)}
    ndiv = sum(t.kind == "Divisorial" for t in ftags)
    want = {"Bir3A": 0, "Bir3B": 2, "Bir3C": 4}[kind]
    _validate(ndiv == want, gen, f"{kind} needs {want} divisorial facets, found {ndiv}", tag)
    return tag


def classify_ridges(g: Geography) -> list[RidgeTag]:
    gen = generality(g)
    return [classify_ridge(g, R, gen) for R in g.classes if R.inside and R.dim == g.dim - 2]

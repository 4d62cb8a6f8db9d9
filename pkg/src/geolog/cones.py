"""Positive cones, the mob+exc decomposition and Mori chambers of the effective cone."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactgeom.cone import ConeRep, Halfspace, cone_from_facets, cone_from_rays
from .exactgeom.linalg import dot, is_zero, primitive
from .exactgeom.polyhedron import Polyhedron
from .geography.affine import Param
from .geography.engine import Geography, compute_geography
from .geography.toric_backend import divisor_family
from .mmp import run_dmmp, section_polytope
from .surface import NotPseudoEffective, SurfaceLattice, zariski_decomposition
from .toric.divisors import InvariantDivisor, _coeffs, numerics, psi
from .toric.fan import ToricModel
from .toric.ops import contract, extremal_rays, flip


class NotInEffective(ValueError):
    pass


@dataclass
class ConeReport:
    """Semiample, nef, mobile and effective cones, in N^1 and pulled back to the span of S."""

    samp: ConeRep
    nef: ConeRep
    mob: ConeRep
    eff: ConeRep
    space: str = "N1"
    pulled: dict = field(default_factory=dict)  # name -> cone in the coordinates of S


def _pullback(cone: ConeRep, A: Sequence[Sequence]) -> ConeRep:
    """{y : sum y_i A_i in cone} for the class matrix with rows A_i."""
    m = len(A)

    def pull(f):
        return tuple(sum((f[k] * A[i][k] for k in range(len(f))), Fraction(0)) for i in range(m))

    facets = [primitive(v) for v in (pull(f) for f in cone.facets) if not is_zero(v)]
    eqs = [primitive(v) for v in (pull(e) for e in cone.equations) if not is_zero(v)]
    return cone_from_facets(facets, eqs, m)


def component_classes(X, S: Sequence) -> list[tuple[Fraction, ...]]:
    """Classes of the components of S (rays or divisors for toric X, classes or labels for surfaces)."""
    if isinstance(X, SurfaceLattice):
        return [X.cls(s) for s in S]
    num = numerics(X)
    out = []
    for s in S:
        if isinstance(s, InvariantDivisor) or (len(s) == len(X.rays) and len(s) != X.d):
            out.append(num.divisor_class(s))
        else:
            out.append(num.ray_classes[X.rays.index(tuple(s))])
    return out


def positive_cones(X, S: Sequence | None = None) -> ConeReport:
    """The four positive cones of an FT model (all toric models; surfaces of log del Pezzo type)."""
    if isinstance(X, SurfaceLattice):
        nef = X.nef_cone()
        rep = ConeReport(nef, nef, nef, X.eff_cone())
    else:
        num = numerics(X)
        nef = num.nef_cone()
        rep = ConeReport(nef, nef, num.mobile_cone(), num.effective_cone())
    if S:
        A = component_classes(X, S)
        rep.pulled = {k: _pullback(getattr(rep, k), A) for k in ("samp", "nef", "mob", "eff")}
    return rep


# -- mob + exc -----------------------------------------------------------------------------


@dataclass
class MobExcDecomposition:
    M: tuple[Fraction, ...]  # divisor coefficients (toric) or class (surface)
    E: tuple[Fraction, ...] | dict
    contraction_id: tuple


def mob_exc(X, D) -> MobExcDecomposition:
    """D = M + E with M mobile and E very exceptional for the 1-contraction given by M.

    Toric: run the D-MMP to Y, where D_Y is nef, and pull D_Y back to X.
    Surface: the Zariski decomposition.
    """
    if isinstance(X, SurfaceLattice):
        try:
            z = zariski_decomposition(X, D)
        except NotPseudoEffective as e:
            raise NotInEffective(str(e)) from e
        return MobExcDecomposition(z.P, dict(z.N), ("surface", tuple(sorted(z.support))))
    D = InvariantDivisor(_coeffs(D))
    run = run_dmmp(X, D)
    if run.fibration is not None:
        raise NotInEffective("divisor is not pseudo-effective")
    Y, DY = run.model, run.model_divisor
    M = tuple(-psi(Y, DY, v) for v in X.rays)
    E = tuple(d - m for d, m in zip(D.coeffs, M))
    return MobExcDecomposition(M, E, Y.key)


def mob_exc_polytope(X: ToricModel, D) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Oracle route: M has coefficients -min_P <m, v_rho> over the section polytope P of D."""
    P = section_polytope(X, D)
    if P.is_empty:
        raise NotInEffective("divisor is not pseudo-effective")
    verts = P.vertices
    M = tuple(-min(dot(m, v) for m in verts) for v in X.rays)
    E = tuple(d - mm for d, mm in zip(_coeffs(D), M))
    return M, E


# -- models and chambers --------------------------------------------------------------------


def enumerate_models(X: ToricModel, limit: int = 10_000) -> list[ToricModel]:
    """All Q-factorial small modifications reachable by flips, in breadth-first order."""
    seen = {X.key: X}
    order = [X]
    queue = deque([X])
    while queue:
        Y = queue.popleft()
        for r in extremal_rays(Y):
            if contract(Y, r).kind != "small":
                continue
            Z = flip(Y, r)
            if Z.key not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("model enumeration exceeded its budget")
                seen[Z.key] = Z
                order.append(Z)
                queue.append(Z)
    return order


def nef_cone_in(X: ToricModel, Y: ToricModel) -> ConeRep:
    """Nef cone of a small modification Y, in the N^1 coordinates of X."""
    numX, numY = numerics(X), numerics(Y)
    rays = []
    for y in numY.nef_cone().rays:
        d = numY.lift(y)
        coeffs = dict(zip(Y.rays, d.coeffs))
        rays.append(numX.divisor_class(tuple(coeffs.get(v, Fraction(0)) for v in X.rays)))
    lin = []
    for y in numY.nef_cone().lineality:
        d = numY.lift(y)
        coeffs = dict(zip(Y.rays, d.coeffs))
        lin.append(numX.divisor_class(tuple(coeffs.get(v, Fraction(0)) for v in X.rays)))
    return cone_from_rays([primitive(r) for r in rays], [primitive(l) for l in lin], n=numX.rho)


@dataclass
class EffClass:
    chamber: Polyhedron  # closure in the slice coordinates t
    cone: ConeRep  # the cone over the chamber in N^1
    contraction: tuple  # lc model key
    model: tuple  # representative Q-factorial model
    exc_support: tuple  # rays with positive coefficient in E
    dim: int


@dataclass
class MoriChambers:
    X: ToricModel
    geography: Geography | None
    classes: list[EffClass]
    to_class: Param  # slice coordinates t -> class y
    ell: tuple = ()  # the slice is ell(y) = 1
    dual: tuple = ()  # t_j = dual_j . (y / ell(y) - y0)
    index: dict = field(default_factory=dict)  # geography class -> position in classes

    @property
    def countries(self) -> list[EffClass]:
        top = max(c.dim for c in self.classes)
        return [c for c in self.classes if c.dim == top]

    def chamber_of(self, y) -> EffClass:
        """The class containing the (nonzero) class y."""
        if self.geography is None:
            self.slice_coords(y)
            return self.classes[0]
        t = self.slice_coords(y)
        return self.classes[self.index[self.geography.locate(t)]]

    def slice_coords(self, y):
        s = dot(self.ell, y)
        if s <= 0:
            raise NotInEffective("class is zero or outside the effective cone")
        y1 = [Fraction(x) / s for x in y]
        diff = [a - b for a, b in zip(y1, self.to_class.b0)]
        return tuple(dot(diff, w) for w in self.dual)


def _single_chamber(X: ToricModel, eff: ConeRep, ell) -> MoriChambers:
    num = numerics(X)
    y = eff.rays[0]
    dec = mob_exc(X, num.lift(y))
    run = run_dmmp(X, num.lift(y))
    exc = tuple(v for v, e in zip(X.rays, dec.E) if e > 0)
    cls = EffClass(Polyhedron(0, []), eff, ("single",), run.model.key, exc, 1)
    return MoriChambers(X, None, [cls], Param.make((Fraction(1) / ell[0],), []), tuple(ell))


def mori_chambers(X: ToricModel) -> MoriChambers:
    """Chambers of the effective cone of X by the D-MMP outcome, on the slice ell(y) = 1."""
    num = numerics(X)
    rho = num.rho
    if rho == 0:
        raise ValueError("N^1 is zero")
    eff = num.effective_cone()
    if eff.lineality:
        raise ValueError("effective cone is not pointed (relative models need a bounded slice)")
    ell = [sum((f[k] for f in eff.facets), Fraction(0)) for k in range(rho)]
    if rho == 1:
        return _single_chamber(X, eff, ell)
    basis = [num.lift(tuple(Fraction(1 if i == k else 0) for i in range(rho))) for k in range(rho)]
    be = divisor_family(X, basis)
    # slice: y = y0 + sum t_j w_j with ell(w_j) = 0
    j0 = next(k for k in range(rho) if ell[k] != 0)
    y0 = tuple(Fraction(1) / ell[j0] if k == j0 else Fraction(0) for k in range(rho))
    cols = []
    for k in range(rho):
        if k == j0:
            continue
        w = [Fraction(0)] * rho
        w[k] = Fraction(1)
        w[j0] = -ell[k] / ell[j0]
        cols.append(tuple(w))
    par = Param.make(y0, cols)
    # region: the effective cone on the slice
    hs = []
    for f in eff.facets:
        a = tuple(dot(f, c) for c in cols)
        c0 = dot(f, y0)
        if is_zero(a):
            continue
        hs.append(Halfspace(a, -c0, "closed"))
    region = Polyhedron(rho - 1, hs)
    g = compute_geography(be, par, region, cube=False)
    classes = []
    index = {}
    for c in g.classes:
        if not c.inside:
            continue
        y = par.b(c.point)
        dec = mob_exc(X, num.lift(y))
        rays = [par.b(v) for v in c.closure.vertices]
        cone = cone_from_rays([primitive(r) for r in rays], n=rho)
        exc = tuple(v for v, e in zip(X.rays, dec.E) if e > 0)
        index[c.index] = len(classes)
        classes.append(EffClass(c.closure, cone, c.lc, c.model, exc, c.dim + 1))
    # t_j is the coordinate of y - y0 at the j-th index other than j0
    dual = tuple(tuple(Fraction(1 if i == k else 0) for i in range(rho)) for k in range(rho) if k != j0)
    return MoriChambers(X, g, classes, par, tuple(ell), dual, index)

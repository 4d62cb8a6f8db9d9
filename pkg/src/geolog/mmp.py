"""The D-MMP driver with traces, numerical Kodaira dimension and lc models."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactgeom.cone import Halfspace, cone_from_facets
from .exactgeom.linalg import primitive, vsub
from .exactgeom.polyhedron import Polyhedron
from .surface import SurfaceLattice, log_mmp_surface
from .toric.divisors import InvariantDivisor, _coeffs
from .toric.fan import ToricModel
from .toric.ops import Base, ExtremalRay, contract, extremal_rays, flip, relative_picard


class NoWlcModel(ValueError):
    """The boundary lies outside the region where wlc models exist."""


@dataclass
class MmpStep:
    kind: str  # divisorial | flip | fiber-stop | nef-stop
    ray: tuple | None
    before: tuple
    after: tuple | None


@dataclass
class MoriFibrationRec:
    total: ToricModel
    base: Base
    ray: ExtremalRay

    @property
    def key(self) -> tuple:
        return (self.total.key, self.base.key)


@dataclass
class MmpRun:
    initial: ToricModel
    divisor: InvariantDivisor
    steps: list[MmpStep]
    model: ToricModel
    model_divisor: InvariantDivisor
    fibration: MoriFibrationRec | None = None

    @property
    def result(self) -> str:
        return "fibration" if self.fibration is not None else "wlc"

    @property
    def step_count(self) -> int:
        return sum(1 for s in self.steps if s.kind in ("divisorial", "flip"))

    @property
    def result_key(self) -> tuple:
        if self.fibration is not None:
            return ("fibration",) + self.fibration.key
        return ("wlc", self.model.key)


def pushforward(X: ToricModel, D, Y: ToricModel) -> InvariantDivisor:
    """Restrict the coefficients of D to the rays of Y (all rays of Y must be rays of X)."""
    c = _coeffs(D)
    pos = {v: i for i, v in enumerate(X.rays)}
    return InvariantDivisor(tuple(c[pos[v]] for v in Y.rays))


def transform(X: ToricModel, D, Y: ToricModel) -> InvariantDivisor:
    """Strict transform of D on Y; rays of Y not on X get coefficient 0."""
    c = _coeffs(D)
    pos = {v: i for i, v in enumerate(X.rays)}
    return InvariantDivisor(tuple(c[pos[v]] if v in pos else Fraction(0) for v in Y.rays))


def _step(Y: ToricModel, DY: InvariantDivisor, ray: ExtremalRay):
    c = contract(Y, ray)
    if c.kind == "fibering":
        return "fiber-stop", c, None
    if c.kind == "divisorial":
        T = c.target
        return "divisorial", c, T
    return "flip", c, flip(Y, ray, DY)


def run_dmmp(X: ToricModel | SurfaceLattice, D, choose: int = 0, max_steps: int = 10_000) -> MmpRun:
    """Run the D-MMP from X, always contracting the D-negative extremal ray of smallest wall key.

    Args:
        X: Q-factorial projective toric model (or a surface lattice).
        D: invariant divisor on X (a class for surface lattices).
        choose: index of the ray among the D-negative ones at the first step
            (later steps use the smallest key); used by the branching search.
    """
    if isinstance(X, SurfaceLattice):
        return log_mmp_surface(X, None, D=D)
    D = InvariantDivisor(_coeffs(D))
    Y, DY, steps = X, D, []
    first = True
    while len(steps) < max_steps:
        rays = extremal_rays(Y, DY)
        if not rays:
            steps.append(MmpStep("nef-stop", None, Y.key, None))
            return MmpRun(X, D, steps, Y, DY)
        r = rays[choose] if first else rays[0]
        first = False
        kind, c, Z = _step(Y, DY, r)
        if kind == "fiber-stop":
            steps.append(MmpStep(kind, r.key, Y.key, None))
            return MmpRun(X, D, steps, Y, DY, MoriFibrationRec(Y, c.base, r))
        steps.append(MmpStep(kind, r.key, Y.key, Z.key))
        DY = pushforward(Y, DY, Z)
        Y = Z
    raise RuntimeError("MMP did not terminate within the step budget")


def all_resulting_models(X: ToricModel, D, limit: int = 10_000) -> set[tuple]:
    """Result keys of the D-MMP over every choice of D-negative extremal ray."""
    D = InvariantDivisor(_coeffs(D))
    seen: set = set()
    out: set = set()
    stack = [(X, D)]
    while stack:
        Y, DY = stack.pop()
        if Y.key in seen:
            continue
        seen.add(Y.key)
        if len(seen) > limit:
            raise RuntimeError("branching MMP exceeded its budget")
        rays = extremal_rays(Y, DY)
        if not rays:
            out.add(("wlc", Y.key))
            continue
        for r in rays:
            kind, c, Z = _step(Y, DY, r)
            if kind == "fiber-stop":
                out.add(("fibration", Y.key, c.base.key))
            else:
                stack.append((Z, pushforward(Y, DY, Z)))
    return out


# -- polytope invariants ----------------------------------------------------------


def section_polytope(X: ToricModel, D) -> Polyhedron:
    """{m : <m, v_rho> >= -d_rho}; its recession cone is the dual of the support."""
    c = _coeffs(D)
    return Polyhedron(X.d, [Halfspace(v, -ci, "closed") for v, ci in zip(X.rays, c)])


def _support_dual_dim(X: ToricModel) -> int:
    supp = X.support
    if supp is None:
        raise ValueError("model has no convex support")
    return supp.dual().dim


def polytope_nu(P: Polyhedron, X: ToricModel) -> int | float:
    if P.is_empty:
        return float("-inf")
    return P.dim - _support_dual_dim(X)


def nu_dimension(X: ToricModel | SurfaceLattice, D) -> int | float:
    """Numerical Kodaira dimension of D over the base; -inf when D is not pseudo-effective."""
    if isinstance(X, SurfaceLattice):
        return surface_nu(X, D)
    return polytope_nu(section_polytope(X, D), X)


def surface_nu(S: SurfaceLattice, D) -> int | float:
    from .surface import NotPseudoEffective, zariski_decomposition

    try:
        z = zariski_decomposition(S, D)
    except NotPseudoEffective:
        return float("-inf")
    return surface_nu_of_positive(S, z.P)


def surface_nu_of_positive(S: SurfaceLattice, P) -> int:
    if all(x == 0 for x in P):
        return 0
    if S.relative:
        return 0
    return 2 if S.dot(P, P) > 0 else 1


@dataclass(frozen=True)
class LcModel:
    """The image of the semiample contraction, as cones in N with common lineality."""

    cones: tuple[tuple, ...]
    lineality: tuple[tuple[int, ...], ...]

    @property
    def key(self) -> tuple:
        return (self.lineality, self.cones)


def normal_fan(P: Polyhedron, X: ToricModel) -> LcModel:
    """Normal fan of the polyhedron P, restricted to the support of X."""
    verts = P.vertices
    supp = X.support
    cones = []
    for m in verts:
        normals = [primitive(vsub(w, m)) for w in verts if w != m]
        normals += [tuple(int(x) for x in f) for f in supp.facets]
        eqs = list(supp.equations)
        c = cone_from_facets(normals, eqs, X.d)
        cones.append(c)
    lin = tuple(sorted(cones[0].lineality)) if cones else ()
    return LcModel(tuple(sorted(c.key() for c in cones)), lin)


def lc_model(X: ToricModel | SurfaceLattice, D) -> LcModel | tuple:
    """The lc (Iitaka) model of a pseudo-effective D.

    Raises:
        NoWlcModel: D is not pseudo-effective.
    """
    if isinstance(X, SurfaceLattice):
        from .surface import NotPseudoEffective, zariski_decomposition

        try:
            z = zariski_decomposition(X, D)
        except NotPseudoEffective as e:
            raise NoWlcModel(str(e)) from e
        return surface_lc_key(X, z.P)
    P = section_polytope(X, D)
    if P.is_empty:
        raise NoWlcModel("divisor is not pseudo-effective")
    return normal_fan(P, X)


def surface_lc_key(S: SurfaceLattice, P) -> tuple:
    nu = surface_nu_of_positive(S, P)
    if nu == 0:
        return ("point",)
    zero = tuple(sorted(c.label for c in S.curves if S.dot(P, c.cls) == 0))
    if nu == 1:
        return ("curve", primitive(P))
    return ("surface", zero)


def resulting_model(X: ToricModel, D) -> MmpRun:
    """Resulting model of the pair whose adjoint divisor is D = K + B."""
    return run_dmmp(X, D)


def check_fibration(run: MmpRun) -> bool:
    """MoriFibrationRec invariants: rho(Y/T) = 1, -D ample over T, dim T < dim Y."""
    f = run.fibration
    if f is None:
        return False
    if relative_picard(f.total, f.base) != 1:
        return False
    if f.base.dim >= f.total.d:
        return False
    from .toric.divisors import numerics
    from .toric.ops import over_walls

    num = numerics(f.total)
    return all(num.intersect(run.model_divisor, w) < 0 for w in over_walls(f.total, f.base))

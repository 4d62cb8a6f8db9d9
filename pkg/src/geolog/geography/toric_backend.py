"""Geography of toric pairs: heights, charts of models and the polytope oracle.

For a boundary B the adjoint b-divisor K + B^log is encoded by its heights
g(v, B) = ild(v) + sum_j b_j psi_j(v) on the rays v of X, where psi_j is the
support function of the j-th general-member component. The positive part is
governed by P(B) = {m : <m, v> >= g(v, B)}, and e(v) = min_P <m, v> - g(v, B).
A chart is the restriction of all these quantities to one Q-factorial model
Y, where they are affine in B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from ..exactgeom.cone import Halfspace
from ..exactgeom.linalg import dot, solve
from ..exactgeom.polyhedron import Polyhedron
from ..mmp import all_resulting_models, normal_fan, polytope_nu, run_dmmp
from ..toric.divisors import InvariantDivisor, is_nef, numerics, psi
from ..toric.fan import ToricModel
from ..toric.ops import common_refinement, contract, extremal_rays, flip, star_subdivide
from .affine import Affine, affine_sum
from .cube import BoundaryCube, UnsupportedCategory

NEG_INF = float("-inf")


@dataclass
class Payload:
    """Values of the tracked functions at one boundary."""

    inside: bool
    e: tuple[Fraction, ...] = ()
    p: tuple[Fraction, ...] = ()
    nu: int | float = NEG_INF
    lc: tuple | None = None

    @property
    def signature(self) -> tuple:
        if not self.inside:
            return ("outside",)
        return (tuple((x > 0) - (x < 0) for x in self.e), tuple((x > 0) - (x < 0) for x in self.p))


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class ToricChart:
    """Affine data of one model Y (rays of Y among the tracked rays of X)."""

    def __init__(self, backend: "ToricBackend", Y: ToricModel):
        self.backend = backend
        self.model = Y
        self.key = Y.key
        self.size = len(Y.rays)
        n = backend.m
        d = Y.d
        gY = [backend.height(v) for v in Y.rays]
        self.pieces: list[list[Affine]] = []
        for cone in Y.cones:
            vec = Y.fan.cone_vectors(cone)
            inv = [solve([list(v) for v in vec], [Fraction(1 if t == k else 0) for t in range(d)]) for k in range(d)]
            # m = A^{-1} g with A rows = rays; inv[k] = A^{-1} e_k
            m = [affine_sum([(inv[k][j], gY[cone[k]]) for k in range(d)], n) for j in range(d)]
            self.pieces.append(m)
        num = numerics(Y)
        self.wall_p: list[Affine] = []
        for col in num.matrix:
            self.wall_p.append(affine_sum([(-x, g) for x, g in zip(col, gY)], n))
        self._h: dict = {}
        dom = list(self.wall_p)
        rays = set(Y.rays)
        for v in backend.R:
            if v not in rays:
                dom.append(self.e(v))
        self.domain = [f for f in dom if not (f.is_const and f.c >= 0)]
        self.infeasible = any(f.is_const and f.c < 0 for f in dom)

    def h(self, v) -> Affine:
        v = tuple(v)
        if v not in self._h:
            ci = self.model.cone_containing(v)
            m = self.pieces[ci]
            self._h[v] = affine_sum([(x, mj) for x, mj in zip(v, m)], self.backend.m)
        return self._h[v]

    def e(self, v) -> Affine:
        return self.h(v) - self.backend.height(v)

    def covers(self, b) -> bool:
        return not self.infeasible and all(f(b) >= 0 for f in self.domain)

    def p_on_V(self, b) -> tuple[Fraction, ...]:
        be = self.backend
        hv = [self.h(v)(b) for v in be.V.rays]
        return tuple(-dot(col, hv) for col in be.V_matrix)

    def lc_key(self, b) -> tuple:
        """Union of the cones of Y across walls where the positive part does not bend."""
        Y = self.model
        num = numerics(Y)
        parent = list(range(len(Y.cones)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for w, f in zip(num.walls, self.wall_p):
            if f(b) == 0:
                a, c = w.cones
                parent[find(a)] = find(c)
        groups: dict = {}
        for ci in range(len(Y.cones)):
            groups.setdefault(find(ci), set()).update(Y.cones[ci])
        from ..exactgeom.cone import cone_from_rays

        cones = [cone_from_rays([Y.rays[i] for i in sorted(g)], n=Y.d) for g in groups.values()]
        lin = tuple(sorted(cones[0].lineality))
        # repeat with the common lineality so keys match the polytope route
        cones = [cone_from_rays(c.rays, lin, n=Y.d) for c in cones]
        return (lin, tuple(sorted(c.key() for c in cones)))

    def payload(self, b) -> Payload:
        be = self.backend
        e = tuple(self.e(v)(b) for v in be.divisors)
        p = self.p_on_V(b)
        lc = self.lc_key(b)
        nu = be.X.d - len(lc[0]) - be.support_dual_dim
        return Payload(True, e, p, nu, lc)


class ToricBackend:
    """Heights on the rays of X, affine in the parameters b.

    Args:
        X: Q-factorial projective model with convex support.
        heights: one affine function per ray of X (canonical ray order).
        extra_height: heights of toric valuations that are not rays of X.
        m: number of parameters.
    """

    kind = "toric"

    def __init__(self, X: ToricModel, heights: Sequence[Affine], extra_height: Callable, m: int):
        if not (X.q_factorial and X.fan.full_dimensional):
            raise UnsupportedCategory("toric geography needs a Q-factorial model")
        if X.support is None or not X.projective:
            raise UnsupportedCategory("toric geography needs a projective model over an affine base")
        self.X = X
        self.m = m
        self.R = list(X.rays)
        self._g = dict(zip(self.R, heights))
        self._extra = extra_height
        self.support_dual_dim = X.support.dual().dim
        self.V = X
        self.V_matrix = numerics(X).matrix
        self.divisors = list(self.R)
        self.curves = [X.fan.wall_key(w) for w in numerics(X).walls]
        self._charts: dict = {}

    # -- heights ------------------------------------------------------------------
    def height(self, v) -> Affine:
        v = tuple(v)
        if v in self._g:
            return self._g[v]
        return self._extra(v)

    def adjoint(self, b) -> InvariantDivisor:
        """Invariant representative of the adjoint divisor on X (psi(v_rho) = g(v_rho))."""
        return InvariantDivisor(tuple(-self._g[v](b) for v in self.R))

    def ns_affines(self) -> list[Affine]:
        """The region where the adjoint class is pseudo-effective, as f >= 0."""
        num = numerics(self.X)
        if num.rho == 0:
            return []
        eff = num.effective_cone()
        # class y(b) = sum_rho c_rho(b) ray_class_rho with c_rho = -g
        out = []
        for f in list(eff.facets) + list(eff.equations) + [tuple(-x for x in e) for e in eff.equations]:
            terms = [(-dot(f, num.ray_classes[i]), self._g[v]) for i, v in enumerate(self.R)]
            g = affine_sum(terms, self.m)
            if not (g.is_const and g.c >= 0):
                out.append(g)
        return out

    # -- charts -------------------------------------------------------------------
    def chart_for(self, Y: ToricModel) -> ToricChart:
        if Y.key not in self._charts:
            self._charts[Y.key] = ToricChart(self, Y)
        return self._charts[Y.key]

    def chart_at(self, b) -> ToricChart | None:
        run = run_dmmp(self.X, self.adjoint(b))
        if run.fibration is not None:
            return None
        return self.chart_for(run.model)

    def finalize(self, charts: Sequence[ToricChart]) -> None:
        """Fix the rather high model V and the tracked divisors and curves.

        V refines every chart built so far, so later slices only add to it.
        """
        keys = tuple(sorted(self._charts))
        if keys == getattr(self, "_finalized", None):
            return
        self._finalized = keys
        models = [self.X] + [c.model for k, c in sorted(self._charts.items()) if k != self.X.key]
        V = common_refinement(models) if len(models) > 1 else self.X
        self.V = V
        num = numerics(V)
        self.V_matrix = num.matrix
        self.divisors = list(self.R) + [v for v in V.rays if v not in self._g]
        self.curves = [V.fan.wall_key(w) for w in num.walls]

    def extra_divisors(self) -> list[tuple[int, ...]]:
        return [v for v in self.divisors if v not in self._g]

    # -- direct oracle ------------------------------------------------------------
    def polytope(self, b) -> Polyhedron:
        return Polyhedron(self.X.d, [Halfspace(v, self._g[v](b), "closed") for v in self.R])

    def direct(self, b) -> Payload:
        P = self.polytope(b)
        if P.is_empty:
            return Payload(False)
        verts = P.vertices

        def h(v):
            return min(dot(m, v) for m in verts)

        e = tuple(h(v) - self.height(v)(b) for v in self.divisors)
        hv = [h(v) for v in self.V.rays]
        p = tuple(-dot(col, hv) for col in self.V_matrix)
        lc = normal_fan(P, self.X)
        return Payload(True, e, p, polytope_nu(P, self.X), lc.key)

    def in_ns_direct(self, b) -> bool:
        return not self.polytope(b).is_empty

    def model_of(self, chart: ToricChart) -> ToricModel:
        return chart.model

    # -- MMP witnesses ------------------------------------------------------------
    def mmp_key(self, b) -> tuple:
        return run_dmmp(self.X, self.adjoint(b)).result_key

    def resulting_set(self, b) -> frozenset:
        return frozenset(all_resulting_models(self.X, self.adjoint(b)))

    def fibration_at(self, b) -> tuple | None:
        run = run_dmmp(self.X, self.adjoint(b))
        if run.fibration is None:
            return None
        return (run.model.key, run.fibration.base.key)

    def divisorial_between(self, big: ToricChart, small: ToricChart) -> tuple | None:
        """The divisor contracted by an elementary divisorial contraction big -> small, if any."""
        Yb, Ys = big.model, small.model
        lost = set(Yb.rays) - set(Ys.rays)
        if len(lost) != 1 or set(Ys.rays) - set(Yb.rays):
            return None
        for r in extremal_rays(Yb):
            c = contract(Yb, r)
            if c.kind == "divisorial" and c.target_key == Ys.key:
                return tuple(lost)
        return None

    def flop_between(self, a: ToricChart, b: ToricChart) -> bool:
        if set(a.model.rays) != set(b.model.rays):
            return False
        for r in extremal_rays(a.model):
            if contract(a.model, r).kind == "small" and flip(a.model, r).key == b.model.key:
                return True
        return False

    # -- generality -----------------------------------------------------------------
    def component_classes(self) -> list[tuple[Fraction, ...]]:
        num = numerics(self.X)
        out = []
        for i in range(self.m):
            c = [-self._g[v].a[i] for v in self.R]
            out.append(num.divisor_class(c) if num.rho else ())
        return out

    @property
    def rho(self) -> int:
        return numerics(self.X).rho

    @property
    def max_nu(self) -> int:
        return self.X.d - self.support_dual_dim


def toric_pair(X: ToricModel, cube: BoundaryCube) -> ToricBackend:
    """Backend for the pair (X, S) with S given by the cube's components.

    Invariant components not among the rays of X are first extracted by star
    subdivision, so every tracked b-divisor in S is a ray of the working model.
    """
    m = cube.m
    gens = []  # (index, divisor on the original X)
    for i, c in enumerate(cube.components):
        if c.divisor is not None:
            if len(c.divisor) != len(X.rays):
                raise ValueError(f"component {c.name} has {len(c.divisor)} coefficients for {len(X.rays)} rays")
            if not is_nef(X, c.divisor):
                raise UnsupportedCategory(f"component {c.name}: general members need a nef (basepoint free) class")
            gens.append((i, X, InvariantDivisor(c.divisor)))
        elif c.ray is None:
            raise UnsupportedCategory("toric pairs take ray or divisor components")
    X0 = X
    for c in cube.components:
        if c.ray is not None and c.ray not in X.rays:
            X = star_subdivide(X, c.ray)
    ray_comp = {c.ray: i for i, c in enumerate(cube.components) if c.ray is not None}

    def general_part(v) -> Affine:
        terms = [(psi(Xj, Lj, v), Affine.coord(m, i)) for i, Xj, Lj in gens]
        return affine_sum(terms, m)

    heights = []
    for v in X.rays:
        if v in ray_comp:
            ild = Affine.coord(m, ray_comp[v], -1, 1)
        elif v in X0.rays:
            ild = Affine.const(m, 1)
        else:
            ild = Affine.const(m, 0)
        heights.append(ild + general_part(v))
    backend = ToricBackend(X, heights, general_part, m)
    backend.cube = cube
    backend.original = X0
    return backend


def divisor_family(X: ToricModel, basis: Sequence[InvariantDivisor]) -> ToricBackend:
    """Backend for D(y) = sum y_k basis_k with heights psi_D(v_rho) = -d_rho (no log terms)."""
    m = len(basis)
    heights = []
    for r in range(len(X.rays)):
        heights.append(affine_sum([(-basis[k].coeffs[r], Affine.coord(m, k)) for k in range(m)], m))

    def extra(v) -> Affine:
        return affine_sum([(psi(X, basis[k], v), Affine.coord(m, k)) for k in range(m)], m)

    return ToricBackend(X, heights, extra, m)

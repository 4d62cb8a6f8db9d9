"""Geography of surface pairs from the Picard lattice.

On a surface every wlc model is a contraction of X, and the Zariski
decomposition K + B = P(B) + F(B) gives e(C, B) = mult_C F(B) and
p(C, B) = P(B).C for the listed curves. A chart fixes the support E of the
negative part; on it P and F are affine in B.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..exactgeom.linalg import matvec
from ..mmp import surface_lc_key, surface_nu_of_positive
from ..surface import (
    NotPseudoEffective,
    SurfaceLattice,
    SurfaceModel,
    log_mmp_surface,
    zariski_by_subsets,
    zariski_decomposition,
)
from .affine import Affine, affine_sum
from .cube import BoundaryCube, UnsupportedCategory
from .toric_backend import Payload


class SurfaceChart:
    def __init__(self, backend: "SurfaceBackend", contracted: Sequence[str]):
        S = backend.S
        self.backend = backend
        self.contracted = tuple(contracted)
        self.model = SurfaceModel(tuple(sorted(self.contracted)))
        self.key = self.model.key
        self.size = -len(self.contracted)
        m = backend.m
        adj = backend.adj
        supp = [S.curve(l) for l in self.contracted]
        if supp and not S.negative_definite(supp):
            raise ValueError("contracted curves must span a negative definite lattice")
        # x = G^{-1} (adj . C_i), affine in b
        k = len(supp)
        G = [[S.dot(a, c) for c in supp] for a in supp]
        from ..exactgeom.linalg import solve

        inv = [solve(G, [Fraction(1 if t == j else 0) for t in range(k)]) for j in range(k)]
        adj_dot = [affine_sum([(x, adj[r]) for r, x in enumerate(matvec(S.gram, c))], m) for c in supp]
        self.x = [affine_sum([(inv[j][i], adj_dot[j]) for j in range(k)], m) for i in range(k)]
        # P = adj - sum x_i C_i, coordinatewise
        self.P = [adj[r] - affine_sum([(c[r], xi) for c, xi in zip(supp, self.x)], m) for r in range(S.rank)]
        self.e_map = {}
        for lab, xi in zip(self.contracted, self.x):
            self.e_map[lab] = xi
        self.p_map = {}
        for c in S.curves:
            gc = matvec(S.gram, c.cls)
            self.p_map[c.label] = affine_sum([(g, pr) for g, pr in zip(gc, self.P)], m)
        dom = list(self.x) + [self.p_map[c.label] for c in S.curves if c.label not in self.contracted]
        self.domain = [f for f in dom if not (f.is_const and f.c >= 0)]
        self.infeasible = any(f.is_const and f.c < 0 for f in dom)

    def e(self, label: str) -> Affine:
        return self.e_map.get(label, Affine.const(self.backend.m, 0))

    def p(self, label: str) -> Affine:
        return self.p_map[label]

    def covers(self, b) -> bool:
        return not self.infeasible and all(f(b) >= 0 for f in self.domain)

    def positive(self, b) -> tuple[Fraction, ...]:
        return tuple(f(b) for f in self.P)

    def payload(self, b) -> Payload:
        be = self.backend
        P = self.positive(b)
        e = tuple(self.e(l)(b) for l in be.divisors)
        p = tuple(self.p(l)(b) for l in be.curves)
        return Payload(True, e, p, surface_nu_of_positive(be.S, P), surface_lc_key(be.S, P))


class SurfaceBackend:
    kind = "surface"

    def __init__(self, S: SurfaceLattice, cube: BoundaryCube):
        self.S = S
        self.cube = cube
        self.m = cube.m
        comps = []
        for c in cube.components:
            if c.cls is not None:
                if len(c.cls) != S.rank:
                    raise ValueError(f"component {c.name} has a class of the wrong rank")
                comps.append(c.cls)
            elif c.curve is not None:
                comps.append(S.curve(c.curve))
            else:
                raise UnsupportedCategory("surface pairs take class or curve components")
        self.components = comps
        m = self.m
        self.adj = [
            affine_sum([(comps[i][r], Affine.coord(m, i)) for i in range(m)], m) + Affine.const(m, S.K[r])
            for r in range(S.rank)
        ]
        self.divisors = [c.label for c in S.curves]
        self.curves = [c.label for c in S.curves]
        self._charts: dict = {}
        self.X = SurfaceModel(())

    def adjoint(self, b) -> tuple[Fraction, ...]:
        return tuple(f(b) for f in self.adj)

    def ns_affines(self) -> list[Affine]:
        if self.S.relative:
            return []
        eff = self.S.eff_cone()
        out = []
        for f in list(eff.facets) + list(eff.equations) + [tuple(-x for x in e) for e in eff.equations]:
            g = affine_sum([(fr, a) for fr, a in zip(f, self.adj)], self.m)
            if not (g.is_const and g.c >= 0):
                out.append(g)
        return out

    def chart_for(self, contracted: Sequence[str]) -> SurfaceChart:
        key = tuple(sorted(contracted))
        if key not in self._charts:
            self._charts[key] = SurfaceChart(self, key)
        return self._charts[key]

    def chart_at(self, b) -> SurfaceChart | None:
        try:
            z = zariski_decomposition(self.S, self.adjoint(b))
        except NotPseudoEffective:
            return None
        return self.chart_for(z.support)

    def finalize(self, charts) -> None:
        pass

    def extra_divisors(self) -> list:
        return []

    def direct(self, b) -> Payload:
        D = self.adjoint(b)
        if not self.S.is_psef(D):
            return Payload(False)
        z = zariski_by_subsets(self.S, D)
        e = tuple(z.N.get(l, Fraction(0)) for l in self.divisors)
        p = tuple(self.S.dot(z.P, self.S.curve(l)) for l in self.curves)
        return Payload(True, e, p, surface_nu_of_positive(self.S, z.P), surface_lc_key(self.S, z.P))

    def in_ns_direct(self, b) -> bool:
        return self.S.is_psef(self.adjoint(b))

    # -- MMP witnesses ------------------------------------------------------------
    def _run(self, b):
        return log_mmp_surface(self.S, None, D=self.adjoint(b))

    def mmp_key(self, b) -> tuple:
        r = self._run(b)
        if r.kind == "fibration":
            return ("fibration", r.model.key, r.base)
        return ("wlc", r.model.key)

    def resulting_set(self, b) -> frozenset:
        return frozenset([self.mmp_key(b)])

    def fibration_at(self, b) -> tuple | None:
        r = self._run(b)
        if r.kind != "fibration":
            return None
        return (r.model.key, (r.base, r.fiber_class))

    def divisorial_between(self, big: SurfaceChart, small: SurfaceChart) -> tuple | None:
        lost = set(small.contracted) - set(big.contracted)
        if len(lost) != 1 or not set(big.contracted) <= set(small.contracted):
            return None
        return tuple(lost)

    def flop_between(self, a, b) -> bool:
        return False

    # -- generality -----------------------------------------------------------------
    def component_classes(self) -> list[tuple[Fraction, ...]]:
        return [tuple(c) for c in self.components]

    @property
    def rho(self) -> int:
        return self.S.rank

    @property
    def max_nu(self) -> int:
        return 0 if self.S.relative else 2


def surface_pair(S: SurfaceLattice, cube: BoundaryCube) -> SurfaceBackend:
    return SurfaceBackend(S, cube)

"""Invariant divisors on toric models: intersection numbers, classes, support functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactgeom.cone import ConeRep, Halfspace, cone_from_facets, cone_from_rays
from ..exactgeom.linalg import dot, is_zero, primitive, qvec, rank, solve, to_q
from ..exactgeom.polyhedron import Polyhedron
from .fan import Fan, FanError, ToricModel, Wall, mult


class NotQCartier(ValueError):
    pass


@dataclass(frozen=True)
class InvariantDivisor:
    """A torus-invariant Q-divisor: one coefficient per ray of the model."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", qvec(self.coeffs))

    @classmethod
    def ray(cls, X: ToricModel, i: int, c=1) -> "InvariantDivisor":
        return cls(tuple(Fraction(c) if j == i else Fraction(0) for j in range(len(X.rays))))

    @classmethod
    def canonical(cls, X: ToricModel) -> "InvariantDivisor":
        return cls(tuple(Fraction(-1) for _ in X.rays))

    def __add__(self, other: "InvariantDivisor") -> "InvariantDivisor":
        return InvariantDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "InvariantDivisor") -> "InvariantDivisor":
        return InvariantDivisor(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, c) -> "InvariantDivisor":
        c = to_q(c) if not isinstance(c, Fraction) else c
        return InvariantDivisor(tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__


def _coeffs(D) -> tuple[Fraction, ...]:
    return D.coeffs if isinstance(D, InvariantDivisor) else qvec(D)


def wall_intersections(X: ToricModel, w: Wall) -> tuple[Fraction, ...]:
    """Vector (D_rho . C_w) over all rays rho, from the wall relation."""
    if not w.interior:
        raise NotQCartier("boundary walls do not carry complete curves")
    fan = X.fan
    tau = fan.cone_vectors(w.rays)
    m_tau = mult(tau)
    out = [Fraction(0)] * len(fan.rays)
    rhs = [Fraction(0)] * X.d
    for ci, u in zip(w.cones, w.outer):
        sigma = fan.cone_vectors(fan.cones[ci])
        val = Fraction(m_tau, mult(sigma))
        out[u] += val
        rhs = [a - val * b for a, b in zip(rhs, fan.rays[u])]
    # coefficients of the wall rays solve sum_i c_i v_i = -(outer terms)
    a = [[tau[j][i] for j in range(len(tau))] for i in range(X.d)]
    c = solve(a, rhs)
    if c is None:
        raise AssertionError("wall relation has no solution")
    for j, ri in enumerate(w.rays):
        out[ri] += c[j]
    return tuple(out)


def intersection_number(X: ToricModel, D, w: Wall) -> Fraction:
    """Exact (D . C_w) for the curve of an interior wall."""
    if not X.q_factorial:
        raise NotQCartier("intersection numbers need a simplicial fan")
    return dot(_coeffs(D), wall_intersections(X, w))


class Numerics:
    """Numerical data of X/Z: curves over the base, N^1 coordinates and curve coordinates.

    N^1(X/Z) is coordinatized by intersection numbers with a canonical basis of
    wall curves; a curve C_w then has coordinates lam_w with D.C_w = y_D . lam_w.
    """

    def __init__(self, X: ToricModel):
        if not (X.q_factorial and X.fan.full_dimensional):
            raise NotQCartier("numerical data needs a full-dimensional simplicial fan")
        if X.support is None:
            raise FanError("numerical data needs a complete fan or convex support")
        self.X = X
        self.walls: list[Wall] = list(X.fan.interior_walls)
        self.matrix = [wall_intersections(X, w) for w in self.walls]  # per wall: vector over rays
        basis = []
        for i, col in enumerate(self.matrix):
            if rank([self.matrix[j] for j in basis] + [col]) > len(basis):
                basis.append(i)
        self.basis = basis
        self.rho = len(basis)
        bcols = [self.matrix[j] for j in basis]
        self.ray_classes = [tuple(bcols[k][r] for k in range(self.rho)) for r in range(len(X.rays))]
        self.curve_coords = []
        for col in self.matrix:
            # col = sum_k lam_k bcols[k] as vectors over rays
            a = [[bcols[k][r] for k in range(self.rho)] for r in range(len(X.rays))]
            lam = solve(a, list(col))
            self.curve_coords.append(lam)
        # rays used to lift classes back to divisors
        lift_rays = []
        for r in range(len(X.rays)):
            if rank([self.ray_classes[i] for i in lift_rays] + [self.ray_classes[r]]) > len(lift_rays):
                lift_rays.append(r)
        self.lift_rays = lift_rays

    def wall_index(self, w: Wall) -> int:
        return self.walls.index(w)

    def divisor_class(self, D) -> tuple[Fraction, ...]:
        c = _coeffs(D)
        return tuple(sum((c[r] * self.ray_classes[r][k] for r in range(len(c))), Fraction(0)) for k in range(self.rho))

    def lift(self, y: Sequence) -> InvariantDivisor:
        """An invariant divisor with the given class, supported on canonical rays."""
        y = qvec(y)
        if self.rho == 0:
            return InvariantDivisor(tuple(Fraction(0) for _ in self.X.rays))
        a = [[self.ray_classes[r][k] for r in self.lift_rays] for k in range(self.rho)]
        sol = solve(a, list(y))
        out = [Fraction(0)] * len(self.X.rays)
        for r, s in zip(self.lift_rays, sol):
            out[r] = s
        return InvariantDivisor(tuple(out))

    def intersect(self, D, wi: int) -> Fraction:
        return dot(_coeffs(D), self.matrix[wi])

    def nef_cone(self) -> ConeRep:
        if self.rho == 0:
            return ConeRep(0, (), (), (), ())
        return cone_from_facets([primitive(l) for l in self.curve_coords], (), self.rho)

    def mori_cone(self) -> ConeRep:
        if self.rho == 0:
            return ConeRep(0, (), (), (), ())
        return cone_from_rays([primitive(l) for l in self.curve_coords], n=self.rho)

    def effective_cone(self) -> ConeRep:
        if self.rho == 0:
            return ConeRep(0, (), (), (), ())
        return cone_from_rays([primitive(y) for y in self.ray_classes if not is_zero(y)], n=self.rho) if any(
            not is_zero(y) for y in self.ray_classes
        ) else ConeRep(self.rho, (), (), (), tuple(tuple(1 if i == j else 0 for j in range(self.rho)) for i in range(self.rho)))

    def mobile_cone(self) -> ConeRep:
        if self.rho == 0:
            return ConeRep(0, (), (), (), ())
        cone = None
        for r in range(len(self.X.rays)):
            others = [self.ray_classes[s] for s in range(len(self.X.rays)) if s != r and not is_zero(self.ray_classes[s])]
            c = cone_from_rays(others, n=self.rho) if others else ConeRep(
                self.rho, (), (), (), tuple(tuple(1 if i == j else 0 for j in range(self.rho)) for i in range(self.rho))
            )
            cone = c if cone is None else cone.intersect(c)
        return cone


def numerics(X: ToricModel) -> Numerics:
    cache = X.__dict__.setdefault("_numerics", None)
    if cache is None:
        cache = Numerics(X)
        X.__dict__["_numerics"] = cache
    return cache


def divisor_class(X: ToricModel, D) -> tuple[Fraction, ...]:
    """Class of D in N^1(X/Z) (intersection numbers with the basis curves)."""
    return numerics(X).divisor_class(D)


def is_nef(X: ToricModel, D) -> bool:
    """D is nef over the base iff D.C_w >= 0 for every interior wall."""
    return all(dot(_coeffs(D), col) >= 0 for col in numerics(X).matrix)


def is_ample(X: ToricModel, D) -> bool:
    return all(dot(_coeffs(D), col) > 0 for col in numerics(X).matrix)


def ample_cone_nonempty(X: ToricModel) -> bool:
    num = numerics(X)
    if num.rho == 0:
        return True
    hs = [Halfspace(primitive(l), 0, "open") for l in num.curve_coords]
    return not Polyhedron(num.rho, hs).is_empty


# -- support functions -----------------------------------------------------------


def support_function(X: ToricModel, D) -> list[tuple[Fraction, ...]]:
    """Linear pieces m_sigma of psi_D, one per maximal cone (psi_D(v_rho) = -d_rho)."""
    c = _coeffs(D)
    out = []
    for cone in X.cones:
        vec = X.fan.cone_vectors(cone)
        m = solve([list(v) for v in vec], [-c[i] for i in cone])
        if m is None:
            raise NotQCartier(f"divisor is not Q-Cartier on cone {cone}")
        out.append(m)
    return out


def psi(X: ToricModel, D, v: Sequence, pieces=None) -> Fraction:
    """Value at v of the piecewise linear support function of D."""
    pieces = pieces if pieces is not None else support_function(X, D)
    ci = X.cone_containing(v)
    return dot(pieces[ci], v)


def log_discrepancy(v: Sequence[int], X: ToricModel, B) -> Fraction:
    """Log discrepancy of the toric valuation v for the pair (X, B).

    It is the value at v of the piecewise linear function equal to 1 - b_rho
    on each ray (B an invariant boundary).
    """
    b = _coeffs(B)
    kb = InvariantDivisor(tuple(bb - 1 for bb in b))
    return psi(X, kb, v)


def is_concave_support(X: ToricModel, pieces, values) -> bool:
    """psi with the given pieces is concave: <m_sigma, u> >= psi(u) for rays u."""
    for ci, m in enumerate(pieces):
        for r, v in enumerate(X.rays):
            if dot(m, v) < values[r]:
                return False
    return True


def strictly_convex_exists(X: ToricModel) -> bool:
    """Projectivity test for arbitrary full-dimensional fans with convex support.

    Unknowns are the values h of a piecewise linear function at the rays; each
    maximal cone forces its values to come from one linear function, and
    across every shared facet the function must bend strictly.
    """
    fan = X.fan
    n = len(fan.rays)
    d = X.d
    eqs = []
    pieces = []  # m_sigma as linear forms in h: list of d rows (each over n unknowns)
    for c in fan.cones:
        vec = fan.cone_vectors(c)
        basis = []
        for i, v in enumerate(vec):
            if rank([vec[j] for j in basis] + [v]) > len(basis):
                basis.append(i)
        if len(basis) < d:
            return False
        a = [list(vec[i]) for i in basis]
        # m = A^{-1} h_basis; row k of A^{-1}
        inv_cols = []
        for k in range(d):
            e = [Fraction(1 if t == k else 0) for t in range(d)]
            inv_cols.append(solve(a, e))
        # m_j = sum_k inv[j][k] h_{basis k}; inv_cols[k][j] = (A^{-1})_{j,k}
        form = []
        for j in range(d):
            row = [Fraction(0)] * n
            for k, bi in enumerate(basis):
                row[c[bi]] += inv_cols[k][j]
            form.append(row)
        pieces.append(form)
        for i, v in enumerate(vec):
            if i in basis:
                continue
            row = [sum((v[j] * form[j][t] for j in range(d)), Fraction(0)) for t in range(n)]
            row[c[i]] -= 1
            if not is_zero(row):
                eqs.append(Halfspace(row, 0, "equal"))
    strict = []
    for i in range(len(fan.cones)):
        for j in range(len(fan.cones)):
            if i == j:
                continue
            common = set(fan.cones[i]) & set(fan.cones[j])
            if len(common) < d - 1 or rank(fan.cone_vectors(sorted(common))) < d - 1:
                continue
            for u in fan.cones[j]:
                if u in common:
                    continue
                v = fan.rays[u]
                row = [sum((v[k] * pieces[i][k][t] for k in range(d)), Fraction(0)) for t in range(n)]
                row[u] -= 1
                if is_zero(row):
                    return False
                strict.append(Halfspace(row, 0, "open"))
    if not strict:
        return True
    return not Polyhedron(n, eqs + strict).is_empty


def picard_number(fan: Fan) -> int:
    """dim of piecewise linear functions (glued across walls) minus dim N / L."""
    d = fan.d
    lin = list(fan.lineality)
    nc = len(fan.cones)
    rows = []
    # each piece m_sigma vanishes on the lineality space
    for ci in range(nc):
        for l in lin:
            row = [Fraction(0)] * (d * nc)
            for k in range(d):
                row[ci * d + k] = Fraction(l[k])
            rows.append(row)
    for i in range(nc):
        for j in range(i + 1, nc):
            common = sorted(set(fan.cones[i]) & set(fan.cones[j]))
            vec = fan.cone_vectors(common) + lin
            if not vec or rank(vec) < d - 1:
                continue
            for v in fan.cone_vectors(common):
                row = [Fraction(0)] * (d * nc)
                for k in range(d):
                    row[i * d + k] = Fraction(v[k])
                    row[j * d + k] = -Fraction(v[k])
                rows.append(row)
    total = d * nc - (rank(rows) if rows else 0)
    return total - (d - len(lin))

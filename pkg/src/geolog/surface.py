"""Surface pairs through their Picard lattice: Zariski decomposition and the log MMP."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exactgeom.cone import ConeRep, cone_from_facets, cone_from_rays
from .exactgeom.linalg import dot, is_zero, matvec, primitive, qvec, solve, to_q


class LatticeError(ValueError):
    pass


class NotPseudoEffective(ValueError):
    pass


def signature(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric rational matrix."""
    a = [list(qvec(r)) for r in gram]
    n = len(a)
    pos = neg = zero = 0
    idx = list(range(n))
    while idx:
        i = idx[0]
        if a[i][i] == 0:
            j = next((j for j in idx[1:] if a[j][j] != 0), None)
            if j is not None:
                i = j
            else:
                k = next((k for k in idx[1:] if a[i][k] != 0), None)
                if k is None:
                    zero += 1
                    idx.remove(i)
                    continue
                # congruence by e_i -> e_i + e_k makes the pivot 2 a_ik
                for t in range(n):
                    a[i][t] += a[k][t]
                for t in range(n):
                    a[t][i] += a[t][k]
        p = a[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(i)
        for j in idx:
            f = a[j][i] / p
            if f:
                for t in range(n):
                    a[j][t] -= f * a[i][t]
                for t in range(n):
                    a[t][j] -= f * a[t][i]
    return pos, neg, zero


@dataclass(frozen=True)
class Curve:
    label: str
    cls: tuple[Fraction, ...]


class SurfaceLattice:
    """N^1 of a surface X/Z with its intersection form and a finite list of curves.

    For an absolute surface the listed curves must generate the Mori cone
    (true for the Fano type surfaces used here). For a relative lattice
    (``relative=True``) the form is negative definite and spanned by the
    exceptional curves of X -> Z.

    Args:
        gram: symmetric integer (or rational) intersection matrix.
        K: canonical class in the lattice basis.
        curves: (label, class) pairs of irreducible curves.
        basis_labels: names of the basis vectors, used only for display.
        relative: True for a birational base Z.
    """

    def __init__(
        self,
        gram: Sequence[Sequence],
        K: Sequence,
        curves: Sequence[tuple[str, Sequence]],
        basis_labels: Sequence[str] | None = None,
        relative: bool = False,
        check: bool = True,
    ):
        self.gram = tuple(qvec(r) for r in gram)
        self.rank = len(self.gram)
        self.K = qvec(K)
        self.curves = tuple(Curve(lab, qvec(c)) for lab, c in curves)
        self.basis_labels = tuple(basis_labels) if basis_labels else tuple(f"x{i}" for i in range(self.rank))
        self.relative = relative
        if check:
            self._check()

    def _check(self):
        n = self.rank
        if any(len(r) != n for r in self.gram) or any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("gram matrix must be square and symmetric")
        if len(self.K) != n or any(len(c.cls) != n for c in self.curves):
            raise LatticeError("class of wrong length")
        if len({c.label for c in self.curves}) != len(self.curves):
            raise LatticeError("repeated curve label")
        sig = signature(self.gram)
        want = (0, n, 0) if self.relative else (1, n - 1, 0)
        if sig != want:
            raise LatticeError(f"intersection form has signature {sig}, expected {want}")
        for c in self.curves:
            if self.dot(self.K, c.cls).denominator != 1:
                raise LatticeError(f"K.{c.label} is not an integer")
        if not self.relative and self.dot(self.K, self.K).denominator != 1:
            raise LatticeError("K^2 is not an integer")

    def dot(self, a: Sequence, b: Sequence) -> Fraction:
        return dot(qvec(a), matvec(self.gram, qvec(b)))

    def curve(self, label: str) -> tuple[Fraction, ...]:
        for c in self.curves:
            if c.label == label:
                return c.cls
        raise KeyError(label)

    def cls(self, x) -> tuple[Fraction, ...]:
        """A class given as a vector, a curve label or a {label: coeff} combination."""
        if isinstance(x, str):
            return self.curve(x)
        if isinstance(x, Mapping):
            out = [Fraction(0)] * self.rank
            for lab, c in x.items():
                v = self.curve(lab)
                out = [a + to_q(c) * b for a, b in zip(out, v)]
            return tuple(out)
        return qvec(x)

    @property
    def negative_curves(self) -> list[Curve]:
        return [c for c in self.curves if self.dot(c.cls, c.cls) < 0]

    def nef_cone(self) -> ConeRep:
        """Dual of the cone of listed curves under the intersection pairing."""
        normals = [primitive(matvec(self.gram, c.cls)) for c in self.curves]
        return cone_from_facets(normals, (), self.rank)

    def eff_cone(self) -> ConeRep:
        if self.relative:
            ident = [tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank)]
            return cone_from_rays([], ident, n=self.rank)
        return cone_from_rays([primitive(c.cls) for c in self.curves], n=self.rank)

    def is_psef(self, D) -> bool:
        return self.relative or self.eff_cone().contains(self.cls(D))

    def negative_definite(self, classes: Sequence[Sequence]) -> bool:
        if not classes:
            return True
        g = [[self.dot(a, b) for b in classes] for a in classes]
        return signature(g) == (0, len(classes), 0)

    def project(self, D, support: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Write D = P + sum x_i C_i with P.C_i = 0; returns (P, x)."""
        D = self.cls(D)
        if not support:
            return D, ()
        g = [[self.dot(a, b) for b in support] for a in support]
        x = solve(g, [self.dot(D, c) for c in support])
        if x is None:
            raise LatticeError("support is degenerate")
        P = tuple(d - sum((xi * c[k] for xi, c in zip(x, support)), Fraction(0)) for k, d in enumerate(D))
        return P, tuple(x)

    def to_json(self) -> dict:
        return {
            "gram": [[str(x) for x in r] for r in self.gram],
            "K": [str(x) for x in self.K],
            "curves": [{"label": c.label, "class": [str(x) for x in c.cls]} for c in self.curves],
            "basis": list(self.basis_labels),
            "relative": self.relative,
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "SurfaceLattice":
        return cls(
            d["gram"],
            d["K"],
            [(c["label"], c["class"]) for c in d["curves"]],
            d.get("basis"),
            bool(d.get("relative", False)),
        )


def nef_test_surface(S: SurfaceLattice, D) -> bool:
    """D.C >= 0 for every listed curve (nefness relative to the recorded curves)."""
    D = S.cls(D)
    return all(S.dot(D, c.cls) >= 0 for c in S.curves)


# -- Zariski decomposition ------------------------------------------------------


@dataclass
class ZariskiDecomposition:
    P: tuple[Fraction, ...]
    N: dict[str, Fraction]
    N_class: tuple[Fraction, ...]

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(sorted(self.N))


def zariski_decomposition(S: SurfaceLattice, D, order: Sequence[str] | None = None) -> ZariskiDecomposition:
    """Zariski decomposition D = P + N by iterated enlargement of the negative support.

    Args:
        S: the lattice.
        D: a pseudo-effective class.
        order: optional processing order of the negative curves (the result
            does not depend on it).

    Raises:
        NotPseudoEffective: D is not in the cone of listed curves.
    """
    D = S.cls(D)
    if not S.is_psef(D):
        raise NotPseudoEffective("class is not pseudo-effective")
    neg = S.negative_curves
    if order is not None:
        rank = {lab: i for i, lab in enumerate(order)}
        neg = sorted(neg, key=lambda c: rank.get(c.label, len(rank)))
    supp: list[Curve] = []
    P, x = D, ()
    while True:
        bad = [c for c in neg if c not in supp and S.dot(P, c.cls) < 0]
        if not bad:
            break
        supp += bad
        P, x = S.project(D, [c.cls for c in supp])
    if any(S.dot(P, c.cls) < 0 for c in S.curves):
        raise NotPseudoEffective("no nef positive part on the recorded curves")
    N = {c.label: xi for c, xi in zip(supp, x) if xi != 0}
    if any(v < 0 for v in N.values()):
        raise AssertionError("negative coefficient in the negative part")
    Nc = tuple(d - p for d, p in zip(D, P))
    return ZariskiDecomposition(P, N, Nc)


def zariski_by_subsets(S: SurfaceLattice, D) -> ZariskiDecomposition:
    """Oracle: scan negative definite subsets for the one satisfying the Zariski conditions."""
    D = S.cls(D)
    neg = S.negative_curves
    found = []
    for k in range(len(neg) + 1):
        for T in combinations(neg, k):
            cl = [c.cls for c in T]
            if not S.negative_definite(cl):
                continue
            P, x = S.project(D, cl)
            if any(xi <= 0 for xi in x):
                continue
            if any(S.dot(P, c.cls) < 0 for c in S.curves):
                continue
            found.append(ZariskiDecomposition(P, {c.label: xi for c, xi in zip(T, x)}, tuple(d - p for d, p in zip(D, P))))
    if len(found) != 1:
        raise NotPseudoEffective(f"{len(found)} candidate decompositions")
    return found[0]


# -- log MMP ---------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceModel:
    """A contraction Y of X: the listed curves it contracts."""

    contracted: tuple[str, ...]

    @property
    def key(self) -> tuple:
        return ("surface", tuple(sorted(self.contracted)))


@dataclass
class SurfaceStep:
    kind: str
    curve: str | None
    before: tuple
    after: tuple | None


@dataclass
class SurfaceMmpResult:
    steps: list[SurfaceStep]
    model: SurfaceModel
    kind: str  # "wlc" | "fibration"
    base: str | None = None  # "point" or "curve" for fibrations
    fiber_class: tuple[Fraction, ...] | None = None
    positive: tuple[Fraction, ...] | None = None  # pullback of K_Y+B_Y

    @property
    def is_wlc(self) -> bool:
        return self.kind == "wlc"


def boundary_class(S: SurfaceLattice, B) -> tuple[Fraction, ...]:
    return S.cls(B) if B is not None else tuple(Fraction(0) for _ in range(S.rank))


def log_mmp_surface(S: SurfaceLattice, B, D=None) -> SurfaceMmpResult:
    """Run the (K+B)-MMP (or the D-MMP when D is given) on the lattice.

    Each step contracts the first listed curve C (in list order) whose image
    is negative against the current divisor and has negative self-intersection;
    the lattice of the new model is the orthogonal complement of the
    contracted curves, and classes are pulled back by orthogonal projection.
    """
    if D is None:
        D = tuple(k + b for k, b in zip(S.K, boundary_class(S, B)))
    else:
        D = S.cls(D)
    contracted: list[Curve] = []
    steps: list[SurfaceStep] = []
    while True:
        cl = [c.cls for c in contracted]
        DY, _ = S.project(D, cl)
        model = SurfaceModel(tuple(c.label for c in contracted))
        images = []
        for c in S.curves:
            if c in contracted:
                continue
            img, _ = S.project(c.cls, cl)
            if not is_zero(img):
                images.append((c, img))
        neg = [(c, img) for c, img in images if S.dot(DY, img) < 0]
        if not neg:
            return SurfaceMmpResult(steps, model, "wlc", positive=DY)
        flip = next(((c, img) for c, img in neg if S.dot(img, img) < 0), None)
        if flip is not None:
            c = flip[0]
            contracted.append(c)
            after = SurfaceModel(tuple(x.label for x in contracted))
            steps.append(SurfaceStep("divisorial", c.label, model.key, after.key))
            continue
        # a D-negative extremal ray of nonnegative square: Mori fibre space
        rho = S.rank - len(contracted)
        cone = cone_from_rays([primitive(img) for _, img in images], n=S.rank)
        ray = next((r for r in cone.rays if S.dot(DY, r) < 0), None)
        if ray is None:
            ray = primitive(neg[0][1])
        sq = S.dot(ray, ray)
        base = "point" if rho == 1 or sq > 0 else "curve"
        steps.append(SurfaceStep("fiber-stop", None, model.key, None))
        return SurfaceMmpResult(steps, model, "fibration", base, tuple(Fraction(x) for x in ray), DY)


def contracted_log_discrepancy(S: SurfaceLattice, B, label: str, contracted: Sequence[str], b_on_curve=Fraction(0)) -> Fraction:
    """a(C, Y, B_Y) for a curve C contracted on Y: 1 - b_C + x_C with K+B = P + sum x C."""
    D = tuple(k + b for k, b in zip(S.K, boundary_class(S, B)))
    cl = [S.curve(l) for l in contracted]
    _, x = S.project(D, cl)
    i = list(contracted).index(label)
    return 1 - to_q(b_on_curve) + x[i]


# -- fixtures --------------------------------------------------------------------


def p2_lattice() -> SurfaceLattice:
    return SurfaceLattice([[1]], [-3], [("l", [1])], ["h"])


def f0_lattice() -> SurfaceLattice:
    return SurfaceLattice([[0, 1], [1, 0]], [-2, -2], [("f1", [1, 0]), ("f2", [0, 1])], ["f1", "f2"])


def f1_lattice() -> SurfaceLattice:
    """Blow-up of P^2 at a point, basis (h, e)."""
    return SurfaceLattice([[1, 0], [0, -1]], [-3, 1], [("e", [0, 1]), ("f", [1, -1])], ["h", "e"])


def dp6_lattice() -> SurfaceLattice:
    """Blow-up of P^2 at three general points, basis (h, e1, e2, e3); the six (-1)-curves."""
    curves = [
        ("e1", [0, 1, 0, 0]),
        ("e2", [0, 0, 1, 0]),
        ("e3", [0, 0, 0, 1]),
        ("l12", [1, -1, -1, 0]),
        ("l13", [1, -1, 0, -1]),
        ("l23", [1, 0, -1, -1]),
    ]
    g = [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
    return SurfaceLattice(g, [-3, 1, 1, 1], curves, ["h", "e1", "e2", "e3"])


def fn_relative_lattice(n: int) -> SurfaceLattice:
    """N^1(F_n/Z) for the contraction of the negative section C onto the cone Z."""
    if n < 2:
        raise LatticeError("the negative section needs n >= 2")
    return SurfaceLattice([[-n]], [Fraction(2 - n, n)], [("C", [1])], ["C"], relative=True)


def cremona_components() -> dict[str, tuple[Fraction, ...]]:
    """Boundary components D1 = 4h and D2 = 8h - 4(e1+e2+e3) on dP6."""
    return {"D1": qvec([4, 0, 0, 0]), "D2": qvec([8, -4, -4, -4])}

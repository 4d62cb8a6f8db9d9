"""Central models, elementary links from fibering ridges and factorization of birational maps.

All models here are toric and live in one lattice N, so every birational map
between them is the identity on N; a map between Mori fibrations with
different lattices is recorded by the integer matrix identifying them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactgeom.cone import cone_from_rays
from .exactgeom.linalg import dot, is_zero, primitive, rank
from .geography.affine import Param
from .geography.classify import RidgeTag, classify_ridge, generality, isolate_vertex
from .geography.cube import BoundaryCube, Component
from .geography.engine import Geography, GeographyClass, compute_geography
from .geography.toric_backend import ToricBackend, toric_pair
from .mmp import run_dmmp
from .toric.divisors import InvariantDivisor, is_ample, is_nef, numerics, psi
from .toric.fan import Fan, ToricModel
from .toric.ops import contract, extremal_rays, flip

SARKISOV = {"Fib2A": "IV", "Fib2C": "II"}


class LinkError(ValueError):
    """A link or chain could not be assembled."""


# -- relative numerics over a base given by its fan key -----------------------------------


def _base_cones(T: tuple) -> list:
    return [cone_from_rays(list(rays), list(lin), n=d) for d, rays, lin in T[1]]


def base_dim(T: tuple, d: int) -> int:
    return d - len(T[0])


def contracted_walls(Y: ToricModel, T: tuple) -> list[int]:
    """Interior walls of Y whose curves map to points of the base T."""
    cones = _base_cones(T)
    num = numerics(Y)
    out = []
    for i, w in enumerate(num.walls):
        rays = {Y.rays[k] for c in w.cones for k in Y.cones[c]}
        if any(all(c.contains(v) for v in rays) for c in cones):
            out.append(i)
    return out


def _relative_basis(Y: ToricModel, T: tuple) -> list[int]:
    num = numerics(Y)
    basis: list[int] = []
    for i in contracted_walls(Y, T):
        vecs = [num.curve_coords[j] for j in basis] + [num.curve_coords[i]]
        if not is_zero(num.curve_coords[i]) and rank(vecs) > len(basis):
            basis.append(i)
    return basis


def relative_rho(Y: ToricModel, T: tuple) -> int:
    """rho(Y/T)."""
    return len(_relative_basis(Y, T))


def _relative_class(Y: ToricModel, basis: Sequence[int], D) -> tuple:
    num = numerics(Y)
    return tuple(num.intersect(D, i) for i in basis)


def relative_positivity(Y: ToricModel, T: tuple, D) -> dict:
    """Nef, big and mobile (in codimension one) over T for an invariant divisor D on Y."""
    num = numerics(Y)
    contracted = contracted_walls(Y, T)
    basis = _relative_basis(Y, T)
    k = len(basis)
    nef = all(num.intersect(D, i) >= 0 for i in contracted)
    if k == 0:
        return {"nef": nef, "big": True, "mobile": True}
    unit = [tuple(Fraction(1 if r == s else 0) for s in range(len(Y.rays))) for r in range(len(Y.rays))]
    imgs = [_relative_class(Y, basis, u) for u in unit]
    y = _relative_class(Y, basis, D)

    def cone_of(vs):
        vs = [primitive(v) for v in vs if not is_zero(v)]
        if not vs:
            return None
        return cone_from_rays(vs, n=k)

    eff = cone_of(imgs)
    big = eff is not None and eff.dim == k and eff.contains_relint(y)
    mobile = True
    for r in range(len(Y.rays)):
        c = cone_of([imgs[s] for s in range(len(Y.rays)) if s != r])
        if c is None or not c.contains(y):
            mobile = False
            break
    return {"nef": nef, "big": big, "mobile": mobile}


def anticanonical_of(Y: ToricModel) -> InvariantDivisor:
    return InvariantDivisor(tuple(Fraction(1) for _ in Y.rays))


def canonical_square(Y: ToricModel) -> Fraction | None:
    """K_Y^2 for a complete toric surface (None otherwise)."""
    if Y.d != 2 or not Y.complete:
        return None
    num = numerics(Y)
    K = InvariantDivisor(tuple(Fraction(-1) for _ in Y.rays))
    return -sum((num.intersect(K, i) for i in range(len(num.walls))), Fraction(0))


def _small_kind(Y: ToricModel, Z: ToricModel) -> str:
    """flip, antiflip or flop for the elementary small modification Y -> Z."""
    num = numerics(Y)
    K = InvariantDivisor(tuple(Fraction(-1) for _ in Y.rays))
    for r in extremal_rays(Y):
        if contract(Y, r).kind == "small" and flip(Y, r).key == Z.key:
            k = num.intersect(K, r.walls[0])
            return "flip" if k < 0 else ("antiflip" if k > 0 else "flop")
    raise LinkError("models are not related by an elementary small modification")


# -- data types ----------------------------------------------------------------------------


@dataclass
class LinkStep:
    kind: str  # extraction | contraction | flip | antiflip | flop
    before: ToricModel
    after: ToricModel
    divisor: tuple | None = None  # the ray extracted or contracted

    def as_dict(self) -> dict:
        return {"kind": self.kind, "before": list(self.before.rays), "after": list(self.after.rays), "divisor": self.divisor}


@dataclass
class CentralModel:
    model: ToricModel
    base: tuple
    F: tuple[Fraction, ...]  # effective part on the rays of the model
    M: tuple[Fraction, ...]  # M = -(K + F) on the rays of the model
    flags: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.flags.values())


@dataclass
class ElementaryLink:
    type: str  # Fib2A | Fib2B | Fib2C
    sarkisov: str
    steps: list[LinkStep]
    start: tuple  # (model key, base key)
    end: tuple
    central: CentralModel
    over: tuple  # the base T of the ridge
    models: list[ToricModel]  # Y_1, ..., Y_m
    ft: tuple = ()  # FT flag of every model
    point: tuple = ()  # boundary on the ridge
    origin: str = "ridge"
    lattice_map: tuple = ((1, 0), (0, 1))

    def reversed(self) -> "ElementaryLink":
        inv = {"extraction": "contraction", "contraction": "extraction", "flip": "antiflip", "antiflip": "flip", "flop": "flop"}
        steps = [LinkStep(inv[s.kind], s.after, s.before, s.divisor) for s in reversed(self.steps)]
        sk = {"I": "III", "III": "I"}.get(self.sarkisov, self.sarkisov)
        return ElementaryLink(
            self.type, sk, steps, self.end, self.start, self.central, self.over, list(reversed(self.models)), tuple(reversed(self.ft)),
            self.point, self.origin, self.lattice_map,
        )

    def as_dict(self) -> dict:
        return {
            "type": self.type,
            "sarkisov": self.sarkisov,
            "steps": [s.as_dict() for s in self.steps],
            "start": _fib_dict(self.start),
            "end": _fib_dict(self.end),
            "central": list(self.central.model.rays),
            "models": [list(Y.rays) for Y in self.models],
            "point": [str(x) for x in self.point],
        }


def _fib_dict(fib: tuple) -> dict:
    model, base = fib
    return {
        "model": [[list(v) for v in c[1]] for c in model],
        "base": {"lineality": [list(l) for l in base[0]], "cones": [[list(v) for v in c[1]] for c in base[1]]},
    }


@dataclass
class LinkReport:
    ok: bool
    violations: list[str]
    checks: dict


@dataclass
class LinkChain:
    links: list[ElementaryLink]
    source: tuple
    target: tuple
    path: list[tuple] = field(default_factory=list)  # boundaries on the separatrix
    identification: tuple = ((1, 0), (0, 1))  # lattice map carrying the target model to the given one

    def composite(self) -> tuple:
        """Lattice map of the composite birational map, followed by the target identification."""
        d = len(self.identification)
        M = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
        for l in self.links:
            M = _matmul(l.lattice_map, M)
        return _matmul(self.identification, M)

    def as_dict(self) -> dict:
        return {
            "links": [l.as_dict() for l in self.links],
            "types": [l.type for l in self.links],
            "path": [[str(x) for x in b] for b in self.path],
            "composite": [list(r) for r in self.composite()],
        }


def _matmul(A, B) -> tuple:
    n, k, m = len(A), len(B), len(B[0])
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)) for i in range(n))


def _identity(d: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


# -- central models and links from ridges ----------------------------------------------------


def central_model_from_models(models: Sequence[ToricModel], T: tuple, F: dict | None = None) -> CentralModel:
    """The rank two model over T among the given ones, with the weak log Fano flags checked.

    Args:
        models: the Q-factorial models of the countries around a ridge.
        T: base (lc model of the ridge) as a fan key.
        F: effective part of the boundary, as ray -> coefficient.
    """
    F = F or {}
    cands = [Y for Y in models if relative_rho(Y, T) == 2]
    if not cands:
        raise LinkError("no model of relative Picard number two over T")
    Y = min(cands, key=lambda Z: (-len(Z.rays), Z.key))
    Fv = tuple(Fraction(F.get(v, 0)) for v in Y.rays)
    M = tuple(1 - f for f in Fv)  # -(K + F) with K = -sum D
    pos_k = relative_positivity(Y, T, anticanonical_of(Y))
    pos_m = relative_positivity(Y, T, M)
    if not (pos_m["big"] and pos_m["mobile"]):
        raise LinkError("M = -(K + F) is not big and mobile over T")
    rays = set(Y.rays)
    same = [Z for Z in models if set(Z.rays) == rays and Z.key != Y.key]
    fano_like = [Z for Z in models if relative_rho(Z, T) == 2 and relative_positivity(Z, T, anticanonical_of(Z))["nef"]]
    orbit = {Z.key for Z in _flop_orbit(Y)}
    flags = {
        "q_factorial_rank_two": Y.q_factorial and relative_rho(Y, T) == 2,
        "weak_log_fano": pos_k["nef"] and pos_k["big"] and all(f >= 0 for f in Fv),
        "m_is_anti_adjoint": pos_m["big"],
        "unique_up_to_flop": all(set(Z.rays) == rays for Z in fano_like),
        "regenerates_models": all(Z.key in orbit for Z in same),
    }
    return CentralModel(Y, T, Fv, M, flags)


def _flop_orbit(Y: ToricModel, limit: int = 64) -> list[ToricModel]:
    seen = {Y.key: Y}
    todo = [Y]
    while todo:
        Z = todo.pop()
        for r in extremal_rays(Z):
            if contract(Z, r).kind != "small":
                continue
            W = flip(Z, r)
            if W.key not in seen and len(seen) < limit:
                seen[W.key] = W
                todo.append(W)
    return list(seen.values())


def central_model(g: Geography, R: GeographyClass | RidgeTag, F: dict | None = None) -> CentralModel:
    """Central model of a ridge of g (a class or a fibering/birational tag)."""
    tag = R if isinstance(R, RidgeTag) else classify_ridge(g, R)
    loc = tag.witnesses["slice"]
    models = [loc.charts[k].model for k in tag.countries]
    return central_model_from_models(models, tag.witnesses["T"], F)


def link_from_tag(tag: RidgeTag, F: dict | None = None) -> ElementaryLink:
    """Assemble the elementary link of a fibering ridge from its arc of facets and countries."""
    if tag.kind not in ("Fib2A", "Fib2B", "Fib2C"):
        raise LinkError(f"ridge of type {tag.kind} is not fibering")
    loc = tag.witnesses["slice"]
    models = [loc.charts[k].model for k in tag.countries]
    steps = []
    for Y, Z, ft in zip(models, models[1:], tag.facets[1:-1]):
        if ft.kind == "Divisorial":
            if len(Z.rays) > len(Y.rays):
                (v,) = set(Z.rays) - set(Y.rays)
                steps.append(LinkStep("extraction", Y, Z, v))
            else:
                (v,) = set(Y.rays) - set(Z.rays)
                steps.append(LinkStep("contraction", Y, Z, v))
        elif ft.kind == "Flopping":
            steps.append(LinkStep(_small_kind(Y, Z), Y, Z))
        else:
            raise LinkError(f"intermediate facet of kind {ft.kind}")
    fibs = tag.witnesses["fibrations"]
    if fibs[0] is None or fibs[1] is None:
        raise LinkError("an end facet carries no Mori fibration")
    sk = SARKISOV.get(tag.kind, "I")
    central = central_model_from_models(models, tag.witnesses["T"], F)
    ft_flags = tuple(True for _ in models)  # toric models are FT
    b = loc.param.b((Fraction(0), Fraction(0)))
    return ElementaryLink(tag.kind, sk, steps, fibs[0], fibs[1], central, tag.witnesses["T"], models, ft_flags, b,
                          lattice_map=_identity(models[0].d))


def link_from_ridge(g: Geography, R: GeographyClass, F: dict | None = None) -> ElementaryLink:
    return link_from_tag(classify_ridge(g, R), F)


# -- validation ---------------------------------------------------------------------------------


def validate_link(l: ElementaryLink) -> LinkReport:
    """Check the structural clauses of an elementary link and the cte conditions of its central model."""
    bad: list[str] = []
    checks: dict = {}
    # rho accounting per step
    ok = True
    for s in l.steps:
        rb, ra = numerics(s.before).rho, numerics(s.after).rho
        nb, na = set(s.before.rays), set(s.after.rays)
        if s.kind == "extraction":
            ok &= ra == rb + 1 and na - nb == {s.divisor} and nb <= na
        elif s.kind == "contraction":
            ok &= ra == rb - 1 and nb - na == {s.divisor} and na <= nb
        else:
            ok &= ra == rb and na == nb
    checks["rho_accounting"] = ok
    if not ok:
        bad.append("rho accounting: a step does not change rho as its kind requires")
    # chain continuity
    cont = all(a.after.key == b.before.key for a, b in zip(l.steps, l.steps[1:]))
    if l.steps:
        cont &= l.steps[0].before.key == l.models[0].key and l.steps[-1].after.key == l.models[-1].key
    cont &= l.start[0] == l.models[0].key and l.end[0] == l.models[-1].key
    checks["continuity"] = cont
    if not cont:
        bad.append("chain: steps do not connect the end fibrations")
    # every model Q-factorial FT with rho(Y/T) <= 2
    ft = len(l.ft) == len(l.models) and all(l.ft) and all(Y.q_factorial for Y in l.models)
    checks["ft"] = ft
    if not ft:
        bad.append("FT: an intermediate model is not Q-factorial FT")
    rel = all(relative_rho(Y, l.over) <= 2 for Y in l.models)
    checks["rho_over_T"] = rel
    if not rel:
        bad.append("rho(Y/T) <= 2 fails for an intermediate model")
    # order: extractions, small modifications, contractions
    kinds = [s.kind for s in l.steps]
    phase = {"extraction": 0, "flip": 1, "antiflip": 1, "flop": 1, "contraction": 2}
    ph = [phase[k] for k in kinds]
    order = ph == sorted(ph) and kinds.count("extraction") <= 2 and kinds.count("contraction") <= 2
    checks["order"] = order
    if not order:
        bad.append("order: steps must be extractions, then small modifications, then contractions")
    flops = kinds.count("flop") <= 1
    checks["flops"] = flops
    if not flops:
        bad.append("at most one flop is allowed")
    # type constraints
    div = [k for k in kinds if k in ("extraction", "contraction")]
    if l.type == "Fib2A":
        typ = not div
    elif l.type == "Fib2B":
        typ = len(div) == 1 and (kinds[0] in ("extraction",) if l.sarkisov == "I" else kinds[-1] == "contraction")
    else:
        typ = len(div) == 2 and kinds[0] == "extraction" and kinds[-1] == "contraction"
    checks["type"] = typ
    if not typ:
        bad.append(f"divisorial steps do not match type {l.type}")
    # cte: -K big and mobile over T, and the sign of K^2
    Y = l.central.model
    pos = relative_positivity(Y, l.over, anticanonical_of(Y))
    checks["anticanonical_big_mobile"] = pos["big"] and pos["mobile"]
    if not checks["anticanonical_big_mobile"]:
        bad.append("cte: -K of the central model is not big and mobile over T")
    k2 = canonical_square(Y)
    checks["K2"] = k2
    if k2 is not None:
        dT = base_dim(l.over, Y.d)
        good = k2 > 0 if dT == 0 else k2 >= 0
        checks["K2_sign"] = good
        if not good:
            bad.append(f"cte: K^2 = {k2} has the wrong sign over a base of dimension {dT}")
    return LinkReport(not bad, bad, checks)


# -- flops ------------------------------------------------------------------------------------


def factor_flops(Y: ToricModel, Y2: ToricModel) -> list[LinkStep]:
    """Elementary small modifications from Y to Y2, by the D-MMP of a polarization of Y2."""
    if set(Y.rays) != set(Y2.rays) or Y.fan.relative_support != Y2.fan.relative_support:
        raise LinkError("models are not small modifications of each other")
    if Y.key == Y2.key:
        return []
    num2 = numerics(Y2)
    A = num2.lift(num2.nef_cone().relint_point())
    if not is_ample(Y2, A):
        raise LinkError("could not polarize the target model")
    coeffs = dict(zip(Y2.rays, A.coeffs))
    D = InvariantDivisor(tuple(coeffs[v] for v in Y.rays))
    run = run_dmmp(Y, D)
    if run.model.key != Y2.key or any(s.kind not in ("flip", "nef-stop") for s in run.steps):
        raise LinkError("the D-MMP did not reach the target by small modifications")
    steps = []
    cur = Y
    for s in run.steps:
        if s.kind != "flip":
            continue
        r = next(r for r in extremal_rays(cur) if r.key == s.ray)
        nxt = flip(cur, r)
        steps.append(LinkStep(_small_kind(cur, nxt), cur, nxt))
        cur = nxt
    return steps


# -- factorization of maps between Mori fibrations ---------------------------------------------


def mori_fibrations(Y: ToricModel) -> list[tuple]:
    """All Mori fibration structures of Y as (model key, base key)."""
    out = []
    for r in extremal_rays(Y):
        c = contract(Y, r)
        if c.kind == "fibering":
            out.append((Y.key, c.base.key))
    return sorted(out)


def transport(Y: ToricModel, A: Sequence[Sequence[int]]) -> ToricModel:
    """The model with fan A^{-1}(fan of Y), in the lattice of the source."""
    inv = _int_inverse(A)
    cones = [[tuple(sum(inv[i][j] * v[j] for j in range(len(v))) for i in range(len(v))) for v in Y.fan.cone_vectors(c)] for c in Y.cones]
    sup = Y.fan.relative_support
    if sup is not None:
        sup = [tuple(sum(inv[i][j] * v[j] for j in range(len(v))) for i in range(len(v))) for v in sup]
        return ToricModel(Fan.from_vectors(Y.d, cones, relative_support=sup))
    return ToricModel(Fan.from_vectors(Y.d, cones))


def _int_inverse(A) -> tuple:
    from .exactgeom.linalg import solve

    n = len(A)
    cols = [solve([list(r) for r in A], [Fraction(1 if i == k else 0) for i in range(n)]) for k in range(n)]
    inv = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    if any(x.denominator != 1 for r in inv for x in r):
        raise LinkError("lattice map is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv)


def _fibration_polarization(Y: ToricModel, base: tuple, N: int) -> InvariantDivisor:
    """N (-K_Y + c g^*H) with g^*H the sum of the horizontal ray divisors, ample for the least c."""
    lin = base[0]
    span = rank([list(l) for l in lin]) if lin else 0

    def in_lin(v):
        return bool(lin) and rank([list(l) for l in lin] + [list(v)]) == span

    G = InvariantDivisor(tuple(Fraction(0 if in_lin(v) else 1) for v in Y.rays))
    num = numerics(Y)
    fibres = contracted_walls(Y, base)
    if not is_nef(Y, G) or any(num.intersect(G, i) != 0 for i in fibres):
        raise LinkError("horizontal ray divisors do not pull back an ample class of the base")
    for c in range(1, 16):
        D = InvariantDivisor(tuple(Fraction(N) * (1 + c * x) for x in G.coeffs))
        if is_ample(Y, D):
            return D
    raise LinkError("could not polarize the Mori fibration")


def _pullback_to(X: ToricModel, Y: ToricModel, D: InvariantDivisor) -> tuple[Fraction, ...]:
    return tuple(-psi(Y, D, v) for v in X.rays)


@dataclass
class PathSetup:
    X: ToricModel
    cube: BoundaryCube
    backend: ToricBackend
    start: tuple
    end: tuple
    N: int


def mori_map_pair(X: ToricModel, source: tuple, target: tuple, N: int = 2, fillers: int = 4) -> PathSetup:
    """Boundary cube of transforms of the two polarizations plus ample fillers until the classes span N^1.

    Args:
        X: common resolution (a Q-factorial projective toric model).
        source: (Y1, base key) with the rays of Y1 among those of X.
        target: (Y2, base key) in the lattice of X.
        N: the polarizations enter as general members of |N(-K + c g^*H)| with coefficient 1/N.
        fillers: budget of ample filler components.
    """
    Y1, T1 = source
    Y2, T2 = target
    D1 = _pullback_to(X, Y1, _fibration_polarization(Y1, T1, N))
    D2 = _pullback_to(X, Y2, _fibration_polarization(Y2, T2, N))
    comps = [Component("D", divisor=D1), Component("Dp", divisor=D2)]
    num = numerics(X)
    classes = [num.divisor_class(D1), num.divisor_class(D2)]
    nef_rays = [num.lift(r) for r in num.nef_cone().rays]
    amp = [sum((d.coeffs[i] for d in nef_rays), Fraction(0)) for i in range(len(X.rays))]
    k = 0
    for j, r in enumerate(nef_rays):
        if rank(classes) >= num.rho:
            break
        A = tuple(a + (j + 1) * x for a, x in zip(amp, r.coeffs))
        y = num.divisor_class(A)
        if rank(classes + [y]) > rank(classes):
            if k >= fillers:
                raise LinkError("filler budget exhausted before the components span N^1")
            comps.append(Component(f"A{k + 1}", divisor=A))
            classes.append(y)
            k += 1
    cube = BoundaryCube(comps)
    be = toric_pair(X, cube)
    m = cube.m
    start = tuple(Fraction(1, N) if i == 0 else Fraction(0) for i in range(m))
    end = tuple(Fraction(1, N) if i == 1 else Fraction(0) for i in range(m))
    return PathSetup(X, cube, be, start, end, N)


def _lift(be: ToricBackend, u) -> tuple[Fraction, ...] | None:
    """The point of the separatrix on the ray through u (u with positive entries)."""
    lam = Fraction(0)
    for f in be.ns_affines():
        au = dot(f.a, u)
        if au > 0 and f.c < 0:
            lam = max(lam, -f.c / au)
    b = tuple(lam * x for x in u)
    if lam <= 0 or not all(f(b) >= 0 for f in be.ns_affines()) or any(x >= 1 for x in b):
        return None
    return b


def _ray_breaks(be: ToricBackend, u0, u1) -> list[Fraction]:
    """Parameters s in (0, 1) where the lifted point of (1-s)u0 + s u1 may change its supporting wall."""
    fs = [f for f in be.ns_affines() if f.c < 0]
    out = set()
    for i, f in enumerate(fs):
        for g in fs[i + 1:]:
            # c_f (a_g . u(s)) = c_g (a_f . u(s)), linear in s
            a0 = f.c * dot(g.a, u0) - g.c * dot(f.a, u0)
            a1 = f.c * dot(g.a, u1) - g.c * dot(f.a, u1)
            if a0 != a1:
                s = a0 / (a0 - a1)
                if 0 < s < 1:
                    out.add(s)
    return sorted(out)


def _mix(u0, u1, s):
    return tuple((1 - s) * x + s * y for x, y in zip(u0, u1))


def separatrix_path(be: ToricBackend, waypoints: Sequence) -> list[tuple]:
    """Lift a piecewise-linear path of directions to the separatrix, as a list of corner boundaries."""
    pts: list = []
    for u0, u1 in zip(waypoints, waypoints[1:]):
        ss = [Fraction(0)] + _ray_breaks(be, u0, u1) + [Fraction(1)]
        for s in ss:
            b = _lift(be, _mix(u0, u1, s))
            if b is None:
                raise LinkError("path leaves the cube or misses the pseudo-effective region")
            if not pts or pts[-1] != b:
                pts.append(b)
    # drop corners that are not bends
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        a, b, c = out[-1], pts[i], pts[i + 1]
        if rank([[y - x for x, y in zip(a, b)], [y - x for x, y in zip(b, c)]]) == 2:
            out.append(b)
    if len(pts) > 1:
        out.append(pts[-1])
    return out


def _fibration_near(be: ToricBackend, b, scale=Fraction(63, 64)) -> tuple | None:
    return be.fibration_at(tuple(scale * x for x in b))


def _crossings(be: ToricBackend, corners: Sequence) -> list[tuple]:
    """Boundaries along the path where the class may change: segment vertices and corners."""
    out: list = []
    for a, b in zip(corners, corners[1:]):
        par = Param.make(a, [tuple(y - x for x, y in zip(a, b))])
        from .exactgeom.polyhedron import Polyhedron

        g = compute_geography(be, par, Polyhedron.box((Fraction(0),), (Fraction(1),)))
        ts = sorted({c.point[0] for c in g.classes if c.dim == 0 and c.inside})
        pts = [par.b((t,)) for t in ts if 0 < t < 1]
        if b != corners[-1]:
            pts.append(b)
        out += pts
    return out


def _normalized(v):
    m = max(abs(x) for x in v)
    return tuple(Fraction(x) / m for x in v)


def factor_along_path(be: ToricBackend, waypoints: Sequence, source: tuple, target: tuple) -> tuple[list[ElementaryLink], list]:
    """Links of the fibering ridges met by the lifted path, oriented from source to target fibration."""
    corners = separatrix_path(be, waypoints)
    gen = None
    links = []
    cur = source
    pts = _crossings(be, corners)
    for i, p in enumerate(pts):
        prev = corners[0] if i == 0 else pts[i - 1]
        nxt = corners[-1] if i == len(pts) - 1 else pts[i + 1]
        d = _normalized(tuple(y - x for x, y in zip(prev, nxt)))
        par = Param.make(p, [d, _normalized(p)])
        gap = min(max(abs(x - y) for x, y in zip(p, q)) for q in (prev, nxt) if q != p)
        iso = isolate_vertex(be, par, eps=min(Fraction(1, 8), gap / 4))
        if iso is None:
            continue
        loc, r = iso
        if gen is None:
            gen = generality(loc)
        tag = classify_ridge(loc, r, gen)
        if tag.kind == "CubeBordering":
            raise LinkError(f"path meets the cube boundary at {p}")
        if tag.kind not in ("Fib2A", "Fib2B", "Fib2C"):
            raise LinkError(f"path crosses a {tag.kind} ridge at {p}")
        link = link_from_tag(tag)
        if link.start != cur and link.end == cur:
            link = link.reversed()
        if link.start != cur:
            raise LinkError(f"link at {p} does not start at the current fibration")
        links.append(link)
        cur = link.end
    if cur != target:
        raise LinkError("path does not end at the target fibration")
    return links, corners


def factor_mori_map(
    X: ToricModel,
    source: tuple,
    target: tuple,
    identification: Sequence[Sequence[int]] | None = None,
    N: int = 2,
    fillers: int = 4,
    delta=Fraction(1, 32),
    tries: int = 6,
) -> LinkChain:
    """Factor the birational map Y1/T1 -> Y2/T2 through the common resolution X into elementary links.

    Args:
        X: common resolution.
        source: (Y1, base key), Y1 in the lattice of X.
        target: (Y2, base key) in its own lattice.
        identification: unimodular A with A(fan of Y2') = fan of Y2, where Y2'
            is the model in the lattice of X; the identity when omitted.
        N: polarization multiple (components enter with coefficient 1/N).
        delta: initial size of the perturbation off the cube faces.
    """
    d = X.d
    A = tuple(tuple(r) for r in (identification or _identity(d)))
    Y1, T1 = source
    Y2, T2 = target
    Y2x = transport(Y2, A) if A != _identity(d) else Y2
    T2x = _transport_base(T2, A, d)
    src, tgt = (Y1.key, T1), (Y2x.key, T2x)
    if src == tgt:
        return LinkChain([], src, tgt, [], A)
    setup = mori_map_pair(X, (Y1, T1), (Y2x, T2x), N, fillers)
    be = setup.backend
    m = setup.cube.m
    last = None
    for k in range(tries):
        dl = delta / (2 ** k)
        weights = [Fraction(1, j + 2) for j in range(m)]
        u0 = tuple(setup.start[i] + (0 if i == 0 else dl * weights[i]) for i in range(m))
        u1 = tuple(setup.end[i] + (0 if i == 1 else dl * weights[i]) for i in range(m))
        b0, b1 = _lift(be, u0), _lift(be, u1)
        if b0 is None or b1 is None or _fibration_near(be, b0) != src or _fibration_near(be, b1) != tgt:
            last = "perturbed end points do not carry the given fibrations"
            continue
        try:
            links, corners = factor_along_path(be, [u0, u1], src, tgt)
        except LinkError as e:
            last = str(e)
            continue
        return LinkChain(links, src, tgt, corners, A)
    raise LinkError(f"no separatrix path within the perturbation budget: {last}")


def _transport_base(T: tuple, A, d: int) -> tuple:
    """Base key of a fibration transported by A^{-1}."""
    inv = _int_inverse(A)

    def tr(v):
        return tuple(sum(inv[i][j] * v[j] for j in range(d)) for i in range(d))

    lin = [tr(l) for l in T[0]]
    cones = [cone_from_rays([tr(v) for v in rays], lin, n=dd) for dd, rays, _ in T[1]]
    lin_c = tuple(cones[0].lineality) if cones else tuple(lin)
    cones = [cone_from_rays(c.rays, lin_c, n=d) for c in cones]
    return (lin_c, tuple(sorted(c.key() for c in cones)))

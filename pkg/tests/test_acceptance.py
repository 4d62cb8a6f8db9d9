"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest
from geoprops import EXTENSIONS, GEOGRAPHY_CHECKS, PAIRS, check_extension, extension, geography
from oracles import eff_oracle, mob_oracle, nef_oracle

from geolog import fixtures
from geolog.cones import mori_chambers, positive_cones
from geolog.geography import classify_facets, classify_ridges, equivalence, geography_of
from geolog.links import base_dim, canonical_square, factor_mori_map, link_from_tag, mori_fibrations, validate_link
from geolog.mmp import lc_model, run_dmmp
from geolog.surface import dp6_lattice, f1_lattice, nef_test_surface, zariski_by_subsets, zariski_decomposition
from geolog.toric import InvariantDivisor, numerics

Q = Fraction


def judge(capsys, n, title, body, limit=None):
    """Run one criterion, print its verdict line and fail the test on any violation."""
    t0 = time.perf_counter()
    err = None
    try:
        detail = body() or ""
    except AssertionError as e:
        err, detail = e, f"violated: {e}"
    dt = time.perf_counter() - t0
    if err is None and limit is not None and dt >= limit:
        err, detail = AssertionError("runtime"), f"runtime {dt:.2f}s exceeds {limit}s"
    with capsys.disabled():
        print(f"\nC{n} {title}: {'FAIL' if err else 'PASS'} ({dt:.2f}s) {detail}".rstrip())
    if err is not None:
        pytest.fail(f"criterion {n}: {detail}")


# -- 1 ------------------------------------------------------------------------------------


def test_c1_negative_section_geography(capsys):
    def body():
        for n in (3, 4, 5):
            t0 = time.perf_counter()
            X, cube = fixtures.fig1_pair(n)
            g = geography_of(X, cube)
            assert len(g.classes) == 3, (n, len(g.classes))
            walls = [c for c in g.classes if c.dim == 0]
            assert [w.point for w in walls] == [(Q(n - 2, n),)], n
            below, above = g.class_at((Q(0),)), g.class_at((Q(1),))
            models = sorted([below.model, walls[0].model, above.model], key=repr)
            # {X, X, Z}: X below and on the wall, Z (C contracted) above
            assert below.model == walls[0].model == X.key, n
            assert above.model != X.key and models.count(X.key) == 2, n
            Z = g.charts[above.model].model
            assert len(Z.rays) == len(X.rays) - 1, n
            assert time.perf_counter() - t0 < 1, n
        return "walls at 1/3, 1/2, 3/5"

    judge(capsys, 1, "negative section thresholds", body, limit=3)


# -- 2 ------------------------------------------------------------------------------------


def test_c2_cremona_geography(capsys):
    def body():
        g = geography_of(*fixtures.cremona_pair())
        countries = [c for c in g.inside_classes if c.dim == 2]
        assert len(countries) == 3, len(countries)
        verts = {v for c in g.classes for v in c.closure.vertices}
        assert (Q(3, 4), Q(0)) in verts and (Q(0), Q(3, 4)) in verts
        # the corner walls meet the axes exactly at 3/4
        axis = sorted(v for v in verts if 0 in v and v != (0, 0) and max(v) < 1)
        assert axis == [(Q(0), Q(3, 4)), (Q(3, 4), Q(0))], axis
        a, b = (Q(3, 4), Q(0)), (Q(0), Q(3, 4))
        assert equivalence(g, a, b, "lcm") is True
        assert equivalence(g, a, b, "wlc") is False
        c1, c3 = (Q(1, 8), Q(7, 8)), (Q(7, 8), Q(1, 8))
        assert g.class_at(c1) in countries and g.class_at(c3) in countries
        assert g.class_at(c1) is not g.class_at(c3)
        assert equivalence(g, c1, c3, "md") is False
        return "3 countries, corners 3/4"

    judge(capsys, 2, "Cremona geography", body, limit=5)


# -- 3 ------------------------------------------------------------------------------------


def test_c3_cone_polyhedrality(capsys):
    models = {
        "P2": fixtures.projective_plane(),
        "F0": fixtures.hirzebruch(0),
        "F1": fixtures.hirzebruch(1),
        "F2": fixtures.hirzebruch(2),
        "dP6": fixtures.dp6_toric(),
    }

    def body():
        for name, X in models.items():
            rep = positive_cones(X, list(X.rays))
            assert rep.pulled["nef"] == nef_oracle(X), name
            assert rep.pulled["eff"] == eff_oracle(X), name
            assert rep.pulled["mob"] == mob_oracle(X), name
        eff = positive_cones(models["dP6"]).eff
        assert len(eff.rays) == 6, len(eff.rays)
        return "Nef/Eff/Mob equal the oracles on 5 models; Eff(dP6) has 6 rays"

    judge(capsys, 3, "cone polyhedrality", body)


# -- 4 ------------------------------------------------------------------------------------


def _random_effective(X, rng):
    w = [Q(rng.randint(0, 400), 100) for _ in X.rays]
    # zero out a few coefficients to reach the smaller chambers
    for i in rng.sample(range(len(w)), rng.randint(0, len(w) - 1)):
        w[i] = Q(0)
    if not any(w):
        w[rng.randrange(len(w))] = Q(1)
    return InvariantDivisor(tuple(w))


def test_c4_chamber_soundness(capsys):
    def body():
        out = []
        for X in (fixtures.dp6_toric(), fixtures.p3_blowup_point()):
            mc = mori_chambers(X)
            num = numerics(X)
            rng = random.Random(2024)
            hits = 0
            for _ in range(200):
                D = _random_effective(X, rng)
                c = mc.chamber_of(num.divisor_class(D))
                run = run_dmmp(X, D)
                assert run.result == "wlc", D
                # the run's landing, read off its final nef divisor, and the polytope route
                landed = lc_model(run.model, run.model_divisor).key
                assert landed == c.contraction, D
                assert lc_model(X, D).key == c.contraction, D
                if c.dim == num.rho:
                    assert run.model.key == c.model, D
                assert run.step_count <= len(mc.classes), D
                hits += 1
            out.append(f"{hits}/200")
        return " and ".join(out)

    judge(capsys, 4, "chamber soundness", body, limit=60)


# -- 5 ------------------------------------------------------------------------------------


def _check_zariski(S, D):
    z = zariski_decomposition(S, D)
    o = zariski_by_subsets(S, D)
    assert z.P == o.P and z.N == o.N, D
    assert nef_test_surface(S, z.P), D
    for lab in z.N:
        assert S.dot(z.P, S.curve(lab)) == 0, (D, lab)
    assert S.negative_definite([S.curve(lab) for lab in z.N]), D
    assert tuple(p + n for p, n in zip(z.P, z.N_class)) == S.cls(D), D
    return z


def test_c5_zariski(capsys):
    def body():
        F1 = f1_lattice()
        fixed = {(1, 0): ((1, 0), {}), (0, 1): ((0, 0), {"e": 1}), (1, 2): ((1, 0), {"e": 2})}
        for D, (P, N) in fixed.items():
            z = _check_zariski(F1, D)
            assert z.P == P and z.N == N, D
        rng = random.Random(5)
        for S in (F1, dp6_lattice()):
            gens = [c.cls for c in S.curves] + list(S.nef_cone().rays)
            for _ in range(100):
                w = [Q(rng.randint(0, 12), rng.randint(1, 4)) if rng.random() < 0.6 else Q(0) for _ in gens]
                if not any(w):
                    w[0] = Q(1)
                D = tuple(sum((x * g[k] for x, g in zip(w, gens)), Q(0)) for k in range(S.rank))
                _check_zariski(S, D)
        return "3 fixed cases and 200 random classes"

    judge(capsys, 5, "mob+exc and Zariski", body)


# -- 6 ------------------------------------------------------------------------------------


def _internal_facets(g):
    """Facets of N_S shared by two countries."""
    out = []
    for F in g.classes_of_dim(g.dim - 1):
        cof = g.cofaces(F)
        if F.inside and len(cof) == 2 and all(c.inside for c in cof):
            out.append(F.index)
    return out


def _links(g, kind):
    return [link_from_tag(t) for t in classify_ridges(g) if t.kind == kind]


def test_c6_facet_ridge_taxonomy(capsys):
    def body():
        internal = 0
        for name in sorted(PAIRS):
            g = geography(name)
            if g.backend.kind == "toric" and g.backend.X.d != 2:
                continue
            tags = {t.facet: t for t in classify_facets(g)}
            assert all(t.kind != "Flopping" for t in tags.values()), name
            for i in _internal_facets(g):
                assert tags[i].kind == "Divisorial", (name, i, tags[i].kind)
                internal += 1
        P2 = fixtures.projective_plane()
        # 2A: P^1 <- F_0 -> P^1 over a point, no steps
        (l,) = _links(geography("quadric-2a"), "Fib2A")
        assert set(l.central.model.rays) == set(fixtures.hirzebruch(0).rays) and l.steps == []
        assert base_dim(l.over, 2) == 0 and l.sarkisov == "IV"
        assert [base_dim(x[1], 2) for x in (l.start, l.end)] == [1, 1] and l.start != l.end
        # 2B: P^2 <- F_1 -> P^1 over a point
        (l,) = _links(geography("plane-blowup-2b"), "Fib2B")
        assert [s.kind for s in l.steps] == ["extraction"]
        Y1, Y2 = l.models
        assert numerics(Y1).rho == numerics(P2).rho == 1 and canonical_square(Y1) == 9
        assert set(Y2.rays) == set(fixtures.hirzebruch(1).rays) and canonical_square(Y2) == 8
        assert base_dim(l.over, 2) == 0 and [base_dim(x[1], 2) for x in (l.start, l.end)] == [0, 1]
        # 2C: F <- Bl F -> F' over a curve
        ls = _links(geography("fiber-modification-2c"), "Fib2C")
        assert ls
        for l in ls:
            assert [s.kind for s in l.steps] == ["extraction", "contraction"]
            F, B, F2 = l.models
            assert [len(Y.rays) for Y in l.models] == [4, 5, 4]
            assert canonical_square(F) == canonical_square(F2) == 8 and canonical_square(B) == 7
            assert F.key != F2.key and l.central.model.key == B.key
            assert base_dim(l.over, 2) == 1 and l.sarkisov == "II"
        for name in ("quadric-2a", "plane-blowup-2b", "fiber-modification-2c"):
            g = geography(name)
            for kind in ("Fib2A", "Fib2B", "Fib2C"):
                for l in _links(g, kind):
                    assert validate_link(l).ok, (name, kind)
        return f"{internal} internal facets all Divisorial; 2A/2B/2C chains match"

    judge(capsys, 6, "facet and ridge taxonomy", body)


# -- 7 ------------------------------------------------------------------------------------


def test_c7_link_factorization(capsys):
    def body():
        X, P = fixtures.dp6_toric(), fixtures.projective_plane()
        (f,) = mori_fibrations(P)
        involution = ((-1, 0), (0, -1))
        chain = factor_mori_map(X, (P, f[1]), (P, f[1]), identification=involution)
        assert chain.links, "empty chain"
        assert all(l.type in ("Fib2A", "Fib2B", "Fib2C") for l in chain.links)
        assert all(validate_link(l).ok for l in chain.links)
        assert chain.composite() == involution
        for a, b in zip(chain.links, chain.links[1:]):
            assert a.end == b.start
        assert chain.links[0].start == chain.source and chain.links[-1].end == chain.target
        F0 = fixtures.hirzebruch(0)
        r1, r2 = (x[1] for x in mori_fibrations(F0))
        rulings = factor_mori_map(F0, (F0, r1), (F0, r2))
        assert [l.type for l in rulings.links] == ["Fib2A"]
        assert validate_link(rulings.links[0]).ok
        return f"Cremona: {[l.type for l in chain.links]}; rulings: one Fib2A"

    judge(capsys, 7, "link factorization", body, limit=30)


# -- 8 ------------------------------------------------------------------------------------


def test_c8_property_suite(capsys):
    def body():
        rng = random.Random(8)
        jobs = [(k, n) for k in sorted(GEOGRAPHY_CHECKS) for n in sorted(PAIRS)] + [("extension", e) for e in EXTENSIONS]
        count = {}
        for i in range(500):
            kind, name = jobs[i % len(jobs)]
            sub = random.Random(rng.getrandbits(64))
            if kind == "extension":
                check_extension(extension(name), sub)
            else:
                try:
                    GEOGRAPHY_CHECKS[kind](geography(name), sub)
                except AssertionError as e:
                    raise AssertionError(f"{kind} on {name}: {e}") from e
            count[kind] = count.get(kind, 0) + 1
        return f"{sum(count.values())} instances over {len(PAIRS)} geographies and {len(EXTENSIONS)} extensions"

    judge(capsys, 8, "geography axioms", body)

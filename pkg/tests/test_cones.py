import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import eff_oracle, mob_oracle, nef_oracle

from geolog.cones import (
    NotInEffective,
    enumerate_models,
    mob_exc,
    mob_exc_polytope,
    mori_chambers,
    nef_cone_in,
    positive_cones,
)
from geolog.fixtures import dp6_toric, hirzebruch, p3_blowup_point, projective_plane, two_flops
from geolog.mmp import lc_model
from geolog.surface import dp6_lattice, f1_lattice
from geolog.toric import InvariantDivisor, numerics

Q = Fraction

ORACLE_MODELS = {
    "P2": projective_plane,
    "F0": lambda: hirzebruch(0),
    "F1": lambda: hirzebruch(1),
    "F2": lambda: hirzebruch(2),
    "dP6": dp6_toric,
    "P3 blown up": p3_blowup_point,
}


@pytest.mark.parametrize("name", sorted(ORACLE_MODELS))
def test_cones_match_divisor_space_oracles(name):
    X = ORACLE_MODELS[name]()
    rep = positive_cones(X, list(X.rays))
    assert rep.pulled["nef"] == nef_oracle(X)
    assert rep.pulled["samp"] == nef_oracle(X)
    assert rep.pulled["eff"] == eff_oracle(X)
    assert rep.pulled["mob"] == mob_oracle(X)


@pytest.mark.parametrize("name", sorted(ORACLE_MODELS))
def test_cone_inclusions(name):
    X = ORACLE_MODELS[name]()
    rep = positive_cones(X)
    assert rep.samp == rep.nef
    assert rep.nef <= rep.mob
    assert rep.mob <= rep.eff


def test_surface_cones():
    rep = positive_cones(f1_lattice(), ["e", "f"])
    assert rep.nef == rep.mob
    assert rep.nef <= rep.eff
    assert set(rep.eff.rays) == {(0, 1), (1, -1)}


# -- mob + exc -------------------------------------------------------------------------


def test_mob_exc_on_f1_lattice():
    d = mob_exc(f1_lattice(), (1, 2))
    assert d.M == (1, 0) and d.E == {"e": 2}


def test_mob_exc_of_exceptional_ray():
    X = dp6_toric()
    d = mob_exc(X, InvariantDivisor.ray(X, 0))
    assert d.M == (0,) * 6
    assert d.E == (1, 0, 0, 0, 0, 0)


def test_mob_exc_rejects_non_effective():
    X = hirzebruch(1)
    with pytest.raises(NotInEffective):
        mob_exc(X, InvariantDivisor.canonical(X))
    with pytest.raises(NotInEffective):
        mob_exc_polytope(X, InvariantDivisor.canonical(X))
    with pytest.raises(NotInEffective):
        mob_exc(f1_lattice(), (-1, 0))


coeff = st.fractions(min_value=0, max_value=4, max_denominator=5)
MODELS = [hirzebruch(1), hirzebruch(2), dp6_toric(), p3_blowup_point()]


@given(st.sampled_from(MODELS), st.data())
def test_mob_exc_agrees_with_polytope_route(X, data):
    n = len(X.rays)
    D = InvariantDivisor(tuple(data.draw(st.lists(coeff, min_size=n, max_size=n))))
    if not any(D.coeffs):
        return
    d = mob_exc(X, D)
    M, E = mob_exc_polytope(X, D)
    assert d.M == M and d.E == E
    assert all(e >= 0 for e in E)
    rep = positive_cones(X, list(X.rays))
    assert rep.pulled["mob"].contains(M)


# -- chambers --------------------------------------------------------------------------


def test_plane_has_one_chamber():
    mc = mori_chambers(projective_plane())
    assert len(mc.classes) == 1


def test_f1_chambers():
    mc = mori_chambers(hirzebruch(1))
    assert len(mc.classes) == 5
    assert len(mc.countries) == 2
    supports = sorted(c.exc_support for c in mc.countries)
    assert supports == [(), ((0, 1),)]


@pytest.fixture(scope="module")
def dp6_chambers():
    return mori_chambers(dp6_toric())


def test_dp6_chamber_counts(dp6_chambers):
    assert len(dp6_chambers.classes) == 109
    assert len(dp6_chambers.countries) == 18


def _independent_sets_of_hexagon():
    count = 0
    for mask in range(64):
        if all(not ((mask >> i) & 1 and (mask >> ((i + 1) % 6)) & 1) for i in range(6)):
            count += 1
    return count


def test_dp6_countries_are_zariski_chambers(dp6_chambers):
    # big chambers correspond to the negative definite sets of (-1)-curves
    S = dp6_lattice()
    labels = [c.label for c in S.negative_curves]
    count = 0
    for mask in range(1 << len(labels)):
        sub = [S.curve(labels[i]) for i in range(len(labels)) if (mask >> i) & 1]
        count += S.negative_definite(sub)
    assert count == _independent_sets_of_hexagon() == len(dp6_chambers.countries)


def test_dp6_grid_oracle_sees_every_country(dp6_chambers):
    X = dp6_chambers.X
    rng = random.Random(7)
    keys = set()
    for _ in range(400):
        w = [Q(rng.randint(1, 10**6), 10**5) for _ in X.rays]
        # push mass onto a random subset of rays so small chambers get hit
        for i in rng.sample(range(6), rng.randint(0, 3)):
            w[i] *= 50
        keys.add(lc_model(X, InvariantDivisor(tuple(w))).key)
    country_keys = {c.contraction for c in dp6_chambers.countries}
    assert keys == country_keys
    assert len(keys) == 18


def test_chamber_lookup_is_consistent(dp6_chambers):
    num = numerics(dp6_chambers.X)
    for c in dp6_chambers.countries:
        y = c.cone.relint_point()
        assert dp6_chambers.chamber_of(y) is c
        assert dp6_chambers.chamber_of(tuple(3 * x for x in y)) is c
        assert c.cone.dim == num.rho


def test_chamber_lookup_rejects_zero(dp6_chambers):
    with pytest.raises(NotInEffective):
        dp6_chambers.chamber_of((0, 0, 0, 0))


# -- models ----------------------------------------------------------------------------


def test_models_without_small_rays():
    for X in [hirzebruch(1), dp6_toric(), p3_blowup_point()]:
        assert len(enumerate_models(X)) == 1
        num = numerics(X)
        assert num.mobile_cone() == num.nef_cone()


def test_two_flops_models():
    Y, Y2 = two_flops()
    models = enumerate_models(Y)
    assert len(models) == 6
    assert Y2.key in {M.key for M in models}


_FLOPS = two_flops()[0]
_FLOP_NEF = [nef_cone_in(_FLOPS, M) for M in enumerate_models(_FLOPS)]


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=3))
def test_mobile_cone_is_union_of_nef_cones(y):
    mob = numerics(_FLOPS).mobile_cone()
    assert mob.contains(y) == any(c.contains(y) for c in _FLOP_NEF)

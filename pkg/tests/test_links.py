from dataclasses import replace

import pytest

from geolog.fixtures import dp6_toric, hirzebruch, projective_plane, quadric_cone_flop, two_flops
from geolog.geography import classify_ridges
from geolog.links import (
    LinkError,
    LinkStep,
    canonical_square,
    factor_flops,
    factor_mori_map,
    link_from_tag,
    mori_fibrations,
    validate_link,
)
from geolog.toric import extremal_rays, flip


def fibering_links(g):
    return [link_from_tag(t) for t in classify_ridges(g) if t.kind in ("Fib2A", "Fib2B", "Fib2C")]


@pytest.fixture(scope="module")
def links(geographies):
    return {name: fibering_links(geographies[name]) for name in ["quadric-2a", "plane-blowup-2b", "fiber-modification-2c"]}


def test_quadric_link(links):
    (l,) = links["quadric-2a"]
    assert l.type == "Fib2A" and l.sarkisov == "IV"
    assert l.steps == []
    assert canonical_square(l.central.model) == 8
    rep = validate_link(l)
    assert rep.ok, rep.violations
    assert l.central.ok


def test_plane_blowup_link(links):
    (l,) = links["plane-blowup-2b"]
    assert l.type == "Fib2B"
    assert [s.kind for s in l.steps] in (["extraction"], ["contraction"])
    assert set(l.central.model.rays) == set(hirzebruch(1).rays)
    assert canonical_square(l.central.model) == 8
    assert validate_link(l).ok
    assert l.central.flags["weak_log_fano"]


def test_fiber_modification_links(links):
    ls = links["fiber-modification-2c"]
    assert sorted(l.type for l in ls) == ["Fib2A", "Fib2B", "Fib2B", "Fib2C", "Fib2C"]
    for l in ls:
        rep = validate_link(l)
        assert rep.ok, (l.type, rep.violations)
    for l in ls:
        if l.type == "Fib2C":
            assert [s.kind for s in l.steps][0] == "extraction"
            assert [s.kind for s in l.steps][-1] == "contraction"


def test_reversed_link_is_valid(links):
    (l,) = links["plane-blowup-2b"]
    r = l.reversed()
    assert r.start == l.end and r.end == l.start
    assert {r.sarkisov, l.sarkisov} == {"I", "III"}
    assert validate_link(r).ok


# -- rejection of fake links -----------------------------------------------------------


def test_two_flops_are_rejected(links):
    (l,) = links["quadric-2a"]
    Y, Y2 = two_flops()
    flops = factor_flops(Y, Y2)
    assert [s.kind for s in flops] == ["flop", "flop"]
    fake = replace(l, steps=flops)
    rep = validate_link(fake)
    assert not rep.ok
    assert not rep.checks["flops"]


def test_non_ft_intermediate_is_rejected(links):
    (l,) = links["plane-blowup-2b"]
    fake = replace(l, ft=tuple(False for _ in l.models))
    rep = validate_link(fake)
    assert not rep.ok and not rep.checks["ft"]


def test_wrong_step_order_is_rejected(links):
    (l,) = links["plane-blowup-2b"]
    s = l.steps[0]
    fake = replace(l, steps=[s, LinkStep("flop", s.after, s.after)] + [LinkStep("extraction", s.after, s.after, s.divisor)])
    rep = validate_link(fake)
    assert not rep.ok


# -- flops and factorization -----------------------------------------------------------


def test_factor_single_flop():
    X = quadric_cone_flop()
    (r,) = extremal_rays(X)
    Y = flip(X, r)
    steps = factor_flops(X, Y)
    assert [s.kind for s in steps] == ["flop"]
    assert steps[0].before.key == X.key and steps[-1].after.key == Y.key
    assert factor_flops(X, X) == []


def test_factor_flops_rejects_other_models():
    with pytest.raises(LinkError):
        factor_flops(hirzebruch(1), hirzebruch(2))


def test_identity_map_has_no_links():
    X = hirzebruch(0)
    (f,) = mori_fibrations(X)[:1]
    chain = factor_mori_map(X, (X, f[1]), (X, f[1]))
    assert chain.links == []
    assert chain.composite() == ((1, 0), (0, 1))


def test_quadric_rulings():
    X = hirzebruch(0)
    f = mori_fibrations(X)
    assert len(f) == 2
    chain = factor_mori_map(X, (X, f[0][1]), (X, f[1][1]))
    assert [l.type for l in chain.links] == ["Fib2A"]
    assert all(validate_link(l).ok for l in chain.links)


def test_cremona_factorization():
    X, P = dp6_toric(), projective_plane()
    (f,) = mori_fibrations(P)
    chain = factor_mori_map(X, (P, f[1]), (P, f[1]), identification=((-1, 0), (0, -1)))
    assert [l.type for l in chain.links] == ["Fib2B", "Fib2C", "Fib2C", "Fib2B"]
    assert [l.sarkisov for l in chain.links][0] == "I" and chain.links[-1].sarkisov == "III"
    assert all(validate_link(l).ok for l in chain.links)
    # consecutive links share their end fibrations
    for a, b in zip(chain.links, chain.links[1:]):
        assert a.end == b.start
    assert chain.links[0].start == chain.source
    assert chain.composite() == ((-1, 0), (0, -1))

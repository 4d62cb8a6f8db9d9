from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geolog.fixtures import cremona_pair
from geolog.surface import (
    LatticeError,
    NotPseudoEffective,
    SurfaceLattice,
    contracted_log_discrepancy,
    cremona_components,
    dp6_lattice,
    f0_lattice,
    f1_lattice,
    fn_relative_lattice,
    log_mmp_surface,
    nef_test_surface,
    p2_lattice,
    signature,
    zariski_by_subsets,
    zariski_decomposition,
)

Q = Fraction


def cremona_boundary(b1, b2):
    c = cremona_components()
    return tuple(b1 * x + b2 * y for x, y in zip(c["D1"], c["D2"]))


# -- lattices --------------------------------------------------------------------------


def test_signatures():
    assert signature([[1, 0], [0, -1]]) == (1, 1, 0)
    assert signature([[0, 1], [1, 0]]) == (1, 1, 0)
    assert signature([[0, 0], [0, 0]]) == (0, 0, 2)


def test_bad_gram_rejected():
    with pytest.raises(LatticeError):
        SurfaceLattice([[1, 2], [0, -1]], [0, 0], [])
    with pytest.raises(LatticeError):
        SurfaceLattice([[1, 0], [0, 1]], [0, 0], [])
    with pytest.raises(LatticeError):
        SurfaceLattice([[-2]], [0], [("C", [1])], relative=False)


def test_repeated_label_rejected():
    with pytest.raises(LatticeError):
        SurfaceLattice([[1, 0], [0, -1]], [-3, 1], [("e", [0, 1]), ("e", [1, -1])])


def test_json_roundtrip():
    S = dp6_lattice()
    T = SurfaceLattice.from_json(S.to_json())
    assert T.gram == S.gram and T.K == S.K and T.curves == S.curves


def test_standard_lattices_are_fano():
    for S in [p2_lattice(), f0_lattice(), f1_lattice(), dp6_lattice()]:
        assert S.dot(S.K, S.K) > 0
        assert all(S.dot(S.K, c.cls) < 0 for c in S.curves)


def test_dp6_degree():
    S = dp6_lattice()
    assert S.dot(S.K, S.K) == 6
    assert len(S.negative_curves) == 6


# -- nef test and Zariski decomposition ------------------------------------------------


def test_f1_nef():
    S = f1_lattice()
    assert nef_test_surface(S, (1, 0))
    assert not nef_test_surface(S, (0, 1))
    assert not nef_test_surface(S, (2, -3))
    assert set(S.nef_cone().rays) == {(1, 0), (1, -1)}


def test_f1_zariski():
    S = f1_lattice()
    z = zariski_decomposition(S, (1, 0))
    assert z.P == (1, 0) and z.N == {}
    z = zariski_decomposition(S, (0, 1))
    assert z.P == (0, 0) and z.N == {"e": 1}
    z = zariski_decomposition(S, (1, 2))
    assert z.P == (1, 0) and z.N == {"e": 2}


def test_not_pseudo_effective():
    S = f1_lattice()
    with pytest.raises(NotPseudoEffective):
        zariski_decomposition(S, (-1, 0))
    with pytest.raises(NotPseudoEffective):
        zariski_by_subsets(S, (-1, 0))


def test_dp6_two_exceptional_curves():
    S = dp6_lattice()
    D = S.cls({"e1": 2, "e2": 1, "l23": 1})
    z = zariski_decomposition(S, (2, 0, 0, 0))
    assert z.N == {}
    z = zariski_decomposition(S, D)
    assert z == zariski_by_subsets(S, D)
    assert all(S.dot(z.P, S.curve(lab)) == 0 for lab in z.N)


def test_relative_lattice_everything_is_effective():
    S = fn_relative_lattice(4)
    z = zariski_decomposition(S, (3,))
    assert z.P == (0,) and z.N == {"C": 3}
    z = zariski_decomposition(S, (-2,))
    assert z.P == (-2,) and z.N == {}


# -- log MMP ---------------------------------------------------------------------------


@pytest.mark.parametrize("a,steps", [(Q(1, 4), 0), (Q(1, 2), 0), (Q(3, 4), 1), (1, 1)])
def test_negative_section_threshold(a, steps):
    S = fn_relative_lattice(4)
    r = log_mmp_surface(S, (a,))
    assert r.kind == "wlc"
    assert len(r.steps) == steps
    assert r.model.contracted == (("C",) if steps else ())


def test_contracted_discrepancy_of_section():
    S = fn_relative_lattice(4)
    # a(C, Z, 0) = 2/n
    assert contracted_log_discrepancy(S, (0,), "C", ["C"]) == Q(1, 2)


def test_plane_is_a_fibration_over_a_point():
    r = log_mmp_surface(p2_lattice(), None)
    assert r.kind == "fibration" and r.base == "point"


def test_f0_fibres_over_a_curve():
    r = log_mmp_surface(f0_lattice(), None)
    assert r.kind == "fibration" and r.base == "curve"


def test_f1_contracts_e_then_stops():
    r = log_mmp_surface(f1_lattice(), None)
    assert [s.curve for s in r.steps if s.kind == "divisorial"] == ["e"]
    assert r.kind == "fibration" and r.base == "point"


@pytest.mark.parametrize(
    "b,contracted",
    [((Q(3, 4), 0), ("e1", "e2", "e3")), ((0, Q(3, 4)), ("l12", "l13", "l23"))],
)
def test_cremona_corners_have_zero_positive_part(b, contracted):
    S, _ = cremona_pair()
    r = log_mmp_surface(S, cremona_boundary(*b))
    assert r.kind == "wlc"
    assert r.model.contracted == contracted
    assert r.positive == (0, 0, 0, 0)


def test_cremona_centre_is_ample():
    S, _ = cremona_pair()
    r = log_mmp_surface(S, cremona_boundary(Q(3, 4), Q(3, 4)))
    assert r.kind == "wlc" and r.model.contracted == ()
    assert r.positive == (6, -2, -2, -2)
    assert all(S.dot(r.positive, c.cls) == 2 for c in S.curves)


def test_cremona_origin_is_a_fibration():
    S, _ = cremona_pair()
    r = log_mmp_surface(S, cremona_boundary(0, 0))
    assert r.kind == "fibration" and r.base == "point"


# -- properties ------------------------------------------------------------------------

LATTICES = [f1_lattice(), dp6_lattice()]
weights = st.fractions(min_value=0, max_value=4, max_denominator=6)


@st.composite
def psef_classes(draw, S):
    """Nonnegative combinations of listed curves plus an ample class."""
    out = [Fraction(0)] * S.rank
    for c in S.curves:
        w = draw(weights)
        out = [a + w * x for a, x in zip(out, c.cls)]
    h = draw(weights)
    out[0] += h
    return tuple(out)


@given(st.data())
def test_zariski_matches_subset_oracle(data):
    S = data.draw(st.sampled_from(LATTICES))
    D = data.draw(psef_classes(S))
    assert zariski_decomposition(S, D) == zariski_by_subsets(S, D)


@given(st.data())
def test_zariski_independent_of_order(data):
    S = data.draw(st.sampled_from(LATTICES))
    D = data.draw(psef_classes(S))
    labels = [c.label for c in S.negative_curves]
    order = data.draw(st.permutations(labels))
    assert zariski_decomposition(S, D, order) == zariski_decomposition(S, D)


@given(st.data())
def test_zariski_idempotent(data):
    S = data.draw(st.sampled_from(LATTICES))
    D = data.draw(psef_classes(S))
    z = zariski_decomposition(S, D)
    assert nef_test_surface(S, z.P)
    zz = zariski_decomposition(S, z.P)
    assert zz.P == z.P and zz.N == {}
    assert all(v > 0 for v in z.N.values())
    assert all(S.dot(z.P, S.curve(lab)) == 0 for lab in z.N)


@given(st.data())
def test_zariski_is_linear_on_a_chamber(data):
    S = data.draw(st.sampled_from(LATTICES))
    D1 = data.draw(psef_classes(S))
    D2 = data.draw(psef_classes(S))
    z1, z2 = zariski_decomposition(S, D1), zariski_decomposition(S, D2)
    if z1.support != z2.support:
        return
    s = zariski_decomposition(S, tuple(a + b for a, b in zip(D1, D2)))
    assert s.P == tuple(a + b for a, b in zip(z1.P, z2.P))
    assert s.N_class == tuple(a + b for a, b in zip(z1.N_class, z2.N_class))


@given(st.fractions(min_value=0, max_value=1, max_denominator=12), st.fractions(min_value=0, max_value=1, max_denominator=12))
def test_cremona_positive_part_is_nef(b1, b2):
    S, _ = cremona_pair()
    r = log_mmp_surface(S, cremona_boundary(b1, b2))
    if r.kind == "wlc":
        for c in S.curves:
            if c.label not in r.model.contracted:
                assert S.dot(r.positive, c.cls) >= 0

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geolog.fixtures import cremona_pair, fig1_pair, fig1_surface_pair, hirzebruch, projective_plane
from geolog.geography import (
    RELATIONS,
    BoundaryCube,
    Component,
    UndefinedValue,
    UnsupportedCategory,
    classify_facets,
    classify_ridges,
    e_value,
    equivalence,
    extend,
    generality,
    geography_of,
    grid_refines,
    ild_value,
    oracle_grid_geography,
    p_value,
    pair_backend,
    separatrix_and_projection,
)

Q = Fraction


def plane_with_lines(k=3):
    X = projective_plane()
    return X, BoundaryCube([Component(f"L{i}", ray=v) for i, v in enumerate(X.rays[:k])])


@pytest.fixture(scope="module")
def plane_lines():
    return geography_of(*plane_with_lines())


# -- the negative section threshold ----------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5])
def test_fig1_three_classes(n):
    g = geography_of(*fig1_pair(n))
    thr = Q(n - 2, n)
    assert [c.dim for c in g.classes] == [1, 1, 0]
    a, b, wall = g.classes
    assert sorted(v[0] for v in a.closure.vertices) == [0, thr]
    assert sorted(v[0] for v in b.closure.vertices) == [thr, 1]
    assert wall.point == (thr,)
    assert all(c.inside for c in g.classes)
    # models: X below the threshold, Z above; the lc model on the wall is Z
    X_key = a.model
    assert wall.model == X_key
    assert b.model != X_key
    assert wall.lc == b.lc
    assert len(wall.wlc_models) == 2


def test_fig1_surface_route_agrees():
    g = geography_of(*fig1_surface_pair(4))
    assert [c.dim for c in g.classes] == [1, 1, 0]
    assert g.classes[2].point == (Q(1, 2),)


def test_fig1_values():
    g = geography_of(*fig1_pair(4))
    C = g.backend.curves[0]
    assert p_value(g, C, (0,)) == 2
    assert p_value(g, C, (Q(1, 4),)) == 1
    for a in [Q(1, 2), Q(3, 4), 1]:
        assert p_value(g, C, (a,)) == 0
    assert e_value(g, (0, 1), (Q(3, 4),)) == Q(1, 4)
    assert e_value(g, (0, 1), (1,)) == Q(1, 2)
    assert e_value(g, (0, 1), (Q(1, 4),)) == 0
    assert ild_value(g, "C", (Q(1, 3),)) == Q(2, 3)
    assert ild_value(g, (1, 0), (Q(1, 3),)) == 1
    assert all(c.nu == 0 for c in g.classes)


def test_fig1_threshold_facet_is_divisorial():
    g = geography_of(*fig1_pair(4))
    tags = classify_facets(g)
    assert [t.kind for t in tags] == ["Divisorial"]
    assert tags[0].validated


def test_fig1_separatrix_is_empty():
    s = separatrix_and_projection(geography_of(*fig1_pair(4)))
    assert s.empty and s.nu_origin == 0 and not s.expected_nonempty


def test_fig1_grid_oracle():
    g = geography_of(*fig1_pair(4))
    o = oracle_grid_geography(g.backend, 8)
    assert len(o.groups) == 3
    assert grid_refines(g, o)


# -- the Cremona geography -------------------------------------------------------------


def test_cremona_countries(geographies):
    g = geographies["cremona"]
    tops = g.classes_of_dim(2)
    assert len(tops) == 4
    inside = [c for c in tops if c.inside]
    assert len(inside) == 3
    assert g.class_at((Q(1, 8), Q(3, 4))).inside
    assert not g.class_at((Q(1, 16), Q(1, 16))).inside
    verts = {v for c in g.classes for v in c.closure.vertices}
    assert (Q(3, 4), 0) in verts and (0, Q(3, 4)) in verts


def test_cremona_relations(geographies):
    g = geographies["cremona"]
    a, b = (Q(3, 4), 0), (0, Q(3, 4))
    assert equivalence(g, a, b, "lcm")
    assert not equivalence(g, a, b, "wlc")
    assert not equivalence(g, (Q(7, 8), Q(1, 8)), (Q(1, 8), Q(7, 8)), "md")
    assert equivalence(g, (Q(7, 8), Q(1, 16)), (Q(15, 16), Q(1, 8)), "md")


def test_cremona_facets_unverified(geographies):
    g = geographies["cremona"]
    gen, why = generality(g)
    assert not gen and "rank" in why
    tags = classify_facets(g)
    kinds = sorted(t.kind for t in tags if t.kind != "CubeBordering")
    assert kinds == ["Divisorial", "Divisorial", "Fibering", "Fibering"]
    assert all(not t.validated for t in tags if t.kind != "CubeBordering")


def test_cremona_separatrix(geographies):
    s = separatrix_and_projection(geographies["cremona"])
    assert not s.empty and s.expected_nonempty
    assert s.nu_origin == float("-inf") and s.nu_top == 2
    assert s.injective()
    assert s.vertices == [(0, Q(3, 4)), (Q(1, 4), Q(1, 4)), (Q(3, 4), 0)]


def test_cremona_grid_oracle(geographies):
    g = geographies["cremona"]
    assert grid_refines(g, oracle_grid_geography(g.backend, 8))


def test_values_undefined_outside(geographies):
    g = geographies["cremona"]
    with pytest.raises(UndefinedValue):
        e_value(g, g.backend.divisors[0], (0, 0))


# -- the plane with lines --------------------------------------------------------------


def test_plane_lines_region(plane_lines):
    g = plane_lines
    assert len(g.classes) == 2
    assert g.in_ns((1, 1, 1)) and not g.in_ns((0, 0, 0))
    assert not g.in_ns((1, 1, Q(99, 100)))


def test_plane_lines_separatrix(plane_lines):
    s = separatrix_and_projection(plane_lines)
    assert s.vertices == [(1, 1, 1)]
    assert s.projection == {(1, 1, 1): (Q(1, 3), Q(1, 3), Q(1, 3))}
    assert s.nu_top == 0 and s.nu_origin == float("-inf")


def test_plane_one_line_is_always_a_fibration():
    X, cube = plane_with_lines(1)
    g = geography_of(X, cube)
    assert [c.inside for c in g.classes] == [False]
    o = oracle_grid_geography(g.backend, 8)
    assert len(o.groups) == 1
    (key,) = o.groups
    assert key[0][0] == "fibration"


def test_plane_extension_by_exceptional_ray(plane_lines):
    X = projective_plane()
    ext = extend(plane_lines, [Component("E", ray=(1, 1))], lambda c: pair_backend(X, c))
    assert ext.shift == (1,)
    for t in product([0, Q(1, 2), Q(2, 3), 1], repeat=3):
        assert ext.slice_equal_at(t)
    assert ext.wlc_preserved((1, 1, 1), (Q(1, 2), 1, 1))


def test_cremona_extension_by_ample_class(geographies):
    S, _ = cremona_pair()
    g = geographies["cremona"]
    ext = extend(g, [Component("A", cls=(1, 0, 0, 0))], lambda c: pair_backend(S, c))
    assert ext.shift == (0,)
    pts = [(Q(i, 8), Q(j, 8)) for i in range(9) for j in range(9)]
    assert all(ext.slice_equal_at(t) for t in pts)
    assert ext.wlc_preserved((Q(1, 8), Q(3, 4)), (Q(5, 8), Q(5, 8)))


def test_extension_names_must_be_new(plane_lines):
    with pytest.raises(ValueError):
        extend(plane_lines, [Component("L0", ray=(1, 1))], lambda c: pair_backend(projective_plane(), c))


def test_non_nef_component_is_unsupported():
    X = hirzebruch(1)
    e = tuple(Q(1 if v == (0, 1) else 0) for v in X.rays)
    with pytest.raises(UnsupportedCategory):
        pair_backend(X, BoundaryCube([Component("E", divisor=e)]))


# -- link fixtures ---------------------------------------------------------------------


def test_quadric_ridge(geographies):
    g = geographies["quadric-2a"]
    assert generality(g)[0]
    kinds = [t.kind for t in classify_facets(g) if t.kind != "CubeBordering"]
    assert kinds == ["Fibering", "Fibering"]
    ridges = [r for r in classify_ridges(g) if r.kind != "CubeBordering"]
    assert [(r.kind, r.m) for r in ridges] == [("Fib2A", 1)]


def test_plane_blowup_ridge(geographies):
    g = geographies["plane-blowup-2b"]
    kinds = sorted(t.kind for t in classify_facets(g) if t.kind != "CubeBordering")
    assert kinds == ["Divisorial", "Fibering", "Fibering"]
    ridges = [r for r in classify_ridges(g) if r.kind != "CubeBordering"]
    assert [(r.kind, r.m) for r in ridges] == [("Fib2B", 2)]


def test_fiber_modification_ridges(geographies):
    g = geographies["fiber-modification-2c"]
    assert g.dim == 3
    kinds = [t.kind for t in classify_facets(g)]
    assert "Flopping" not in kinds
    ridges = [r for r in classify_ridges(g) if r.kind != "CubeBordering"]
    assert sorted(r.kind for r in ridges) == sorted(["Bir3C", "Fib2B", "Fib2C", "Fib2B", "Fib2A", "Fib2C"])
    assert all(r.m == 3 for r in ridges if r.kind == "Fib2C")


def test_no_flopping_facets_on_surfaces(geographies):
    for name in ["cremona", "quadric-2a", "plane-blowup-2b"]:
        assert all(t.kind != "Flopping" for t in classify_facets(geographies[name]))


# -- relations -------------------------------------------------------------------------

frac = st.fractions(min_value=0, max_value=1, max_denominator=16)


@given(st.tuples(frac, frac), st.tuples(frac, frac))
def test_relation_implications(geographies, t1, t2):
    g = geographies["cremona"]
    eq = {r: equivalence(g, t1, t2, r) for r in RELATIONS}
    assert eq["wlc"] <= eq["lcm"]
    assert eq["wlc"] <= eq["fix"]
    assert eq["wlc"] == (eq["fix"] and eq["lcm"])
    assert eq["lcm"] == eq["mob"]
    assert eq["wlc"] <= eq["md"] or not g.in_ns(t1)


@given(st.tuples(frac, frac), st.tuples(frac, frac))
def test_same_class_means_same_signature(geographies, t1, t2):
    g = geographies["cremona"]
    same = g.locate(t1) == g.locate(t2)
    assert same == (g.payload_at(t1).signature == g.payload_at(t2).signature)


def test_unknown_relation(geographies):
    with pytest.raises(ValueError):
        equivalence(geographies["cremona"], (0, 0), (1, 1), "birational")

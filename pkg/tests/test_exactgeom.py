from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geolog.exactgeom import (
    DimensionMismatch,
    Halfspace,
    Polyhedron,
    RepresentationMismatch,
    arrangement_chambers,
    cone_from_facets,
    cone_from_rays,
    dual_rep,
    intersect_and_faces,
)
from geolog.exactgeom import _kernel_py, _kernel_select
from geolog.exactgeom.linalg import det, rank
from geolog.io import dumps
from geolog.surface import f1_lattice

Q = Fraction


# -- dual representations --------------------------------------------------------------


def test_quadrant_facets():
    c = dual_rep(rays=[(1, 0), (0, 1)])
    assert c.facets == ((0, 1), (1, 0))
    assert c.equations == ()


def test_degenerate_cone_is_origin():
    c = dual_rep(facets=[(1, 0), (0, 1), (-1, -1)])
    assert c.rays == () and c.lineality == ()
    assert c.dim == 0


def test_nef_f1_facets_are_pairings_with_e_and_f():
    S = f1_lattice()
    h, e = (1, 0), (0, 1)
    f = (1, -1)
    c = dual_rep(rays=[h, (1, -1)])
    # D.e >= 0 and D.f >= 0 as linear forms on (a, b) = a h + b e
    pair_e = tuple(S.dot(x, e) for x in [(1, 0), (0, 1)])
    pair_f = tuple(S.dot(x, f) for x in [(1, 0), (0, 1)])
    want = sorted(tuple(int(v) for v in n) for n in (pair_e, pair_f))
    assert list(c.facets) == want


def test_mismatched_representations_raise():
    with pytest.raises(RepresentationMismatch):
        dual_rep(rays=[(1, 0), (0, 1)], facets=[(1, 0)])


def test_consistent_representations_accepted():
    c = dual_rep(rays=[(1, 0), (0, 1)], facets=[(1, 0), (0, 1)])
    assert c.rays == ((0, 1), (1, 0))


def test_lineality_is_kept():
    c = dual_rep(rays=[(1, 0, 0)], lineality=[(0, 1, 0)])
    assert c.lineality_dim == 1
    assert c.contains((5, -7, 0)) and not c.contains((-1, 0, 0))


# -- polyhedra -------------------------------------------------------------------------


def test_square_cut_by_line_is_segment():
    r = intersect_and_faces(Polyhedron.cube(2), Polyhedron(2, [Halfspace((1, 0), 1, "equal")]))
    assert r["dim"] == 1
    assert len(r["facets"]) == 2
    assert sorted(r["vertices"]) == [(1, 0), (1, 1)]


def test_square_open_halfspace_empty():
    r = intersect_and_faces(Polyhedron.cube(2), Polyhedron(2, [Halfspace((1, 0), 1, "open")]))
    assert r["empty"] and r["dim"] == -1


def test_square_cut_to_triangle():
    r = intersect_and_faces(Polyhedron.cube(2), Polyhedron(2, [Halfspace((-4, -4), -3, "closed")]))
    assert r["dim"] == 2
    assert sorted(r["vertices"]) == [(0, 0), (0, Q(3, 4)), (Q(3, 4), 0)]


def test_triangle_by_vertex_enumeration_oracle():
    # brute force: every pair of tight constraints, solved and filtered
    rows = [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1), ((-4, -4), -3)]
    pts = set()
    for (a, x), (b, y) in product(rows, rows):
        dd = a[0] * b[1] - a[1] * b[0]
        if dd == 0:
            continue
        p = (Q(x * b[1] - y * a[1], dd), Q(a[0] * y - b[0] * x, dd))
        if all(n[0] * p[0] + n[1] * p[1] >= c for n, c in rows):
            pts.add(p)
    P = Polyhedron(2, [Halfspace(n, c, "closed") for n, c in rows])
    assert sorted(pts) == sorted(P.vertices)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        intersect_and_faces(Polyhedron.cube(2), Polyhedron.cube(3))


def test_ridges_of_cube():
    r = intersect_and_faces(Polyhedron.cube(3), Polyhedron.cube(3))
    assert len(r["facets"]) == 6
    assert len(r["ridges"]) == 12


# -- arrangements ----------------------------------------------------------------------


def test_interval_with_midpoint_wall():
    cc = arrangement_chambers(Polyhedron.cube(1), [((2,), 1)])
    merged = cc.merged()
    assert len(merged) == 3
    assert sorted(c.dim for c in merged.cells) == [0, 1, 1]


def test_square_without_walls_has_nine_faces():
    cc = arrangement_chambers(Polyhedron.cube(2))
    assert len(cc.cells) == 9
    assert sorted(c.dim for c in cc.cells) == [0] * 4 + [1] * 4 + [2]


def test_corner_walls_merge_by_payload():
    cc = arrangement_chambers(Polyhedron.cube(2), [((4, 0), 3), ((0, 4), 3)])
    assert len(cc.cells) == 25
    assert len(cc.cells_of_dim(2)) == 4

    def payload(cell):
        x, y = cell.point
        return (x > Q(3, 4), y > Q(3, 4))

    merged = cc.merged(payload)
    assert len([c for c in merged.cells if c.dim == 2]) == 4
    # joining the two upper cells leaves three top dimensional classes
    merged = cc.merged(lambda c: c.point[1] > Q(3, 4) or payload(c))
    assert len([c for c in merged.cells if c.dim == 2]) == 3


def _grid(n, k):
    return [tuple(Q(i, n) for i in idx) for idx in product(range(n + 1), repeat=k)]


@pytest.mark.parametrize(
    "walls",
    [[], [((4, 0), 3), ((0, 4), 3)], [((1, 1), 1), ((1, -1), 0), ((2, 0), 1)], [((3, 1), 2)]],
)
def test_chamber_cover_and_disjointness(walls):
    cc = arrangement_chambers(Polyhedron.cube(2), walls)
    for x in _grid(12, 2):
        inside = [i for i, c in enumerate(cc.cells) if c.closure.in_relint(x)]
        assert len(inside) == 1
        assert cc.locate(x) == inside[0]


@pytest.mark.parametrize("walls", [[((4, 0), 3), ((0, 4), 3)], [((1, 1), 1), ((1, -1), 0)]])
def test_face_criterion(walls):
    cc = arrangement_chambers(Polyhedron.cube(2), walls)
    for a in cc.cells:
        for b in cc.cells:
            meets = b.closure.contains_closure(a.point) if a.dim < b.dim else a is b
            face = a.closure.is_face_of(b.closure)
            assert meets == face


def test_adjacency_is_symmetric():
    cc = arrangement_chambers(Polyhedron.cube(2), [((1, 1), 1)])
    adj = cc.adjacency
    for i, js in adj.items():
        for j in js:
            assert i in adj[j]


# -- properties ------------------------------------------------------------------------

small = st.integers(min_value=-3, max_value=3)


@st.composite
def ray_sets(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    k = draw(st.integers(min_value=1, max_value=min(8, n + 3)))
    rays = draw(st.lists(st.lists(small, min_size=n, max_size=n), min_size=k, max_size=k))
    return n, [tuple(r) for r in rays if any(r)]


@given(ray_sets())
def test_vh_roundtrip(data):
    n, rays = data
    c = cone_from_rays(rays, n=n)
    back = cone_from_facets(c.facets, c.equations, n)
    assert back == c
    assert c.dual().dual() == c
    for r in rays:
        assert c.contains(r)


@given(ray_sets())
def test_dual_cone_pairs_nonnegatively(data):
    n, rays = data
    c = cone_from_rays(rays, n=n)
    d = cone_from_facets(c.facets, c.equations, n).dual()
    for y in d.rays:
        assert all(sum(a * b for a, b in zip(y, r)) >= 0 for r in c.rays)


matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(matrices)
def test_kernels_agree(rows):
    assert _kernel_select.bareiss_rank(rows) == _kernel_py.bareiss_rank(rows) == rank(rows)
    assert _kernel_select.bareiss_det(rows) == _kernel_py.bareiss_det(rows) == det(rows)


def test_kernel_overflow_falls_back():
    big = 10**12
    rows = [[big, 1, 3], [2, big, 5], [7, 11, big]]
    assert _kernel_select.bareiss_det(rows) == det(rows)
    assert _kernel_select.bareiss_rank(rows) == 3


@given(ray_sets())
def test_double_description_backends_agree(data):
    n, rays = data
    c = cone_from_rays(rays, n=n)
    saved = _kernel_select._compiled
    try:
        _kernel_select._compiled = None
        pure = cone_from_rays(rays, n=n)
    finally:
        _kernel_select._compiled = saved
    assert pure == c


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6))
def test_serialized_values_reparse_exactly(xs):
    import json

    text = dumps({"v": xs})
    back = [Fraction(s) for s in json.loads(text)["v"]]
    assert back == xs

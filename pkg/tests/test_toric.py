from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geolog.fixtures import (
    anticanonical,
    dp6_toric,
    fn_relative,
    hirzebruch,
    p3_blowup_point,
    projective_plane,
    projective_space,
    quadric_cone_flop,
)
from geolog.io import fan_from_json
from geolog.toric import (
    Fan,
    FanError,
    InvariantDivisor,
    contract,
    divisor_class,
    extremal_rays,
    flip,
    flipped_ray,
    intersection_number,
    is_ample,
    is_nef,
    log_discrepancy,
    numerics,
    picard_number,
    psi,
    relative_picard,
    star_subdivide,
    support_function,
    validate_and_canonicalize,
)

Q = Fraction


def wall_of_ray(X, v):
    """The interior wall of a complete surface fan spanned by the ray v."""
    i = X.rays.index(v)
    return next(w for w in X.fan.interior_walls if w.rays == (i,))


# -- validity --------------------------------------------------------------------------


def test_overlapping_cones_rejected():
    fan = Fan(2, [(1, 0), (0, 1), (1, 1)], [[0, 1], [0, 2]])
    with pytest.raises(FanError):
        validate_and_canonicalize(fan)


def test_non_primitive_ray_rejected():
    with pytest.raises(FanError):
        Fan(2, [(2, 0), (0, 1)], [[0, 1]])


def test_rank_mismatch_rejected():
    with pytest.raises(FanError):
        Fan(2, [(1, 0, 0), (0, 1)], [[0, 1]])


def test_non_extremal_listed_ray_rejected():
    fan = Fan(2, [(1, 0), (1, 1), (0, 1)], [[0, 1, 2]])
    with pytest.raises(FanError):
        validate_and_canonicalize(fan)


def test_relative_support_mismatch_rejected():
    fan = Fan(2, [(1, 0), (0, 1)], [[0, 1]], relative_support=[(1, 0), (-1, 1)])
    with pytest.raises(FanError):
        validate_and_canonicalize(fan)


def test_json_fan_is_canonicalized():
    X = fan_from_json({"lattice_rank": 2, "rays": [[0, 1], [-1, -1], [1, 0]], "cones": [[0, 1], [1, 2], [2, 0]]})
    assert X.rays == ((-1, -1), (0, 1), (1, 0))
    assert X.key == projective_plane().key


def test_plane_flags():
    X = projective_plane()
    assert X.q_factorial and X.projective and X.complete and not X.relative


def test_relative_model_flags():
    X = fn_relative(4)
    assert X.relative and not X.complete and X.projective


# -- intersection numbers and classes --------------------------------------------------


def test_plane_numerics():
    X = projective_plane()
    num = numerics(X)
    assert num.rho == 1
    assert num.ray_classes == [(1,), (1,), (1,)]
    assert num.nef_cone().rays == ((1,),)
    assert num.effective_cone().rays == ((1,),)
    assert divisor_class(X, InvariantDivisor.canonical(X)) == (-3,)
    assert is_ample(X, anticanonical(X))


def test_f1_negative_section():
    X = hirzebruch(1)
    assert X.rays == ((-1, 1), (0, -1), (0, 1), (1, 0))
    e = InvariantDivisor.ray(X, 2)
    assert intersection_number(X, e, wall_of_ray(X, (0, 1))) == -1
    fibre = InvariantDivisor.ray(X, 3)
    assert intersection_number(X, fibre, wall_of_ray(X, (-1, 1))) == 0
    assert intersection_number(X, fibre, wall_of_ray(X, (1, 0))) == 0
    assert intersection_number(X, fibre, wall_of_ray(X, (0, 1))) == 1


def test_f1_cones():
    num = numerics(hirzebruch(1))
    assert num.nef_cone().rays == ((0, 1), (1, 1))
    assert num.effective_cone().rays == ((0, 1), (1, 0))
    assert num.mobile_cone() == num.nef_cone()


def test_dp6_cones():
    num = numerics(dp6_toric())
    assert num.rho == 4
    assert len(num.effective_cone().rays) == 6
    assert len(num.nef_cone().facets) == 6


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_self_intersection_of_section(n):
    X = hirzebruch(n)
    e = InvariantDivisor.ray(X, X.rays.index((0, 1)))
    assert intersection_number(X, e, wall_of_ray(X, (0, 1))) == -n


def test_plane_log_discrepancies():
    X = projective_plane()
    zero = (0, 0, 0)
    assert log_discrepancy((1, 1), X, zero) == 2
    assert log_discrepancy((1, 0), X, zero) == 1
    assert log_discrepancy((1, 0), X, (0, 0, Q(1, 2))) == Q(1, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cyclic_quotient_discrepancy(n):
    X = fn_relative(n)
    (r,) = extremal_rays(X)
    c = contract(X, r)
    assert c.kind == "divisorial"
    Z = c.target
    assert Z.rays == ((-1, n), (1, 0))
    assert log_discrepancy((0, 1), Z, (0, 0)) == Q(2, n)


def test_support_function_values():
    X = hirzebruch(1)
    D = InvariantDivisor((1, 2, 3, 4))
    for i, v in enumerate(X.rays):
        assert psi(X, D, v) == -D.coeffs[i]


# -- contractions ----------------------------------------------------------------------


def test_f1_contractions():
    X = hirzebruch(1)
    kinds = sorted(contract(X, r).kind for r in extremal_rays(X))
    assert kinds == ["divisorial", "fibering"]
    div = next(contract(X, r) for r in extremal_rays(X) if contract(X, r).kind == "divisorial")
    assert div.target.rays == ((-1, 1), (0, -1), (1, 0))
    assert div.target.complete and numerics(div.target).rho == 1


def test_f0_contractions_are_rulings():
    X = hirzebruch(0)
    cs = [contract(X, r) for r in extremal_rays(X)]
    assert [c.kind for c in cs] == ["fibering", "fibering"]
    assert all(c.base.dim == 1 for c in cs)


def test_negative_rays_only():
    X = hirzebruch(1)
    K = InvariantDivisor.canonical(X)
    assert len(extremal_rays(X, K)) == 2
    assert extremal_rays(X, anticanonical(X)) == []


@pytest.mark.parametrize("make", [hirzebruch, lambda n: dp6_toric(), lambda n: p3_blowup_point()])
def test_each_contraction_drops_picard_by_one(make):
    X = make(1)
    for r in extremal_rays(X):
        c = contract(X, r)
        assert relative_picard(X, c.target if c.target is not None else c.base) == 1


def test_projection_formula_for_blowup():
    X = hirzebruch(1)
    (r,) = [r for r in extremal_rays(X) if contract(X, r).kind == "divisorial"]
    T = contract(X, r).target
    exc = wall_of_ray(X, (0, 1))
    for coeffs in [(1, 0, 0), (0, 1, 0), (2, -1, 3), (Q(1, 2), 0, Q(5, 3))]:
        D = InvariantDivisor(coeffs)
        pieces = support_function(T, D)
        pulled = InvariantDivisor(tuple(-psi(T, D, v, pieces) for v in X.rays))
        assert intersection_number(X, pulled, exc) == 0
        for v in T.rays:
            assert intersection_number(X, pulled, wall_of_ray(X, v)) == intersection_number(T, D, wall_of_ray(T, v))
        assert is_nef(X, pulled) == is_nef(T, D)


def test_flip_is_an_involution():
    X = quadric_cone_flop()
    (r,) = extremal_rays(X)
    assert contract(X, r).kind == "small"
    Y = flip(X, r)
    assert Y.key != X.key
    back = flip(Y, flipped_ray(X, r, Y))
    assert back.key == X.key


def test_star_subdivision_adds_ray():
    X = star_subdivide(projective_space(3), (1, 1, 1))
    assert (1, 1, 1) in X.rays
    assert picard_number(X.fan) == 2
    assert star_subdivide(X, (1, 1, 1)) is X
    with pytest.raises(FanError):
        star_subdivide(X, (2, 2, 2))


# -- properties ------------------------------------------------------------------------

coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
models = [hirzebruch(1), hirzebruch(2), dp6_toric(), p3_blowup_point(), projective_space(3)]


@given(st.sampled_from(models), st.data())
def test_class_determines_intersections(X, data):
    n = len(X.rays)
    D = InvariantDivisor(tuple(data.draw(st.lists(coeff, min_size=n, max_size=n))))
    m = data.draw(st.lists(coeff, min_size=X.d, max_size=X.d))
    shifted = InvariantDivisor(tuple(c + sum(a * b for a, b in zip(m, v)) for c, v in zip(D.coeffs, X.rays)))
    num = numerics(X)
    assert num.divisor_class(shifted) == num.divisor_class(D)
    for w in num.walls:
        assert intersection_number(X, shifted, w) == intersection_number(X, D, w)


@given(st.sampled_from(models), st.data())
def test_lift_inverts_class(X, data):
    num = numerics(X)
    y = tuple(data.draw(st.lists(coeff, min_size=num.rho, max_size=num.rho)))
    assert num.divisor_class(num.lift(y)) == y


@given(st.sampled_from(models), st.data())
def test_nef_iff_class_in_nef_cone(X, data):
    n = len(X.rays)
    D = InvariantDivisor(tuple(data.draw(st.lists(coeff, min_size=n, max_size=n))))
    num = numerics(X)
    assert is_nef(X, D) == num.nef_cone().contains(num.divisor_class(D))

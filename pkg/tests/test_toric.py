"""Toric layer: fans, MPCP, Hodge numbers, divisors, the projective
bundle / contraction pipeline for compactified line bundles."""
import pytest

from conftest import HEX_NABLA, P2_DELTA, P3_DELTA
from nefmirror.errors import DomainError, InputError, SmoothnessError
from nefmirror.lattice import (
    convex_hull,
    is_reflexive,
    lattice_points,
    normalized_volume,
    polar_dual,
)
from nefmirror.toric import (
    ToricDivisor,
    anticanonical,
    bundle_nef_divisor,
    cartier_data,
    divisor_from_polytope,
    divisor_polytope,
    face_fan,
    fan_from_json,
    fan_to_json,
    fan_validate,
    gl_canonical_form,
    hodge_numbers_smooth_toric,
    is_ample,
    is_calabi_yau_cover,
    is_complete,
    is_fano,
    is_nef,
    is_simplicial,
    is_smooth,
    linear_equivalence_witness,
    linearly_equivalent,
    make_fan,
    mpcp_fan,
    normal_fan,
    projective_bundle_fan,
    semiample_contraction,
)

P2_FAN = normal_fan(convex_hull(P2_DELTA))
P1_FAN = normal_fan(convex_hull([(-1,), (1,)]))
HEX_FAN = normal_fan(convex_hull(HEX_NABLA))
# the del Pezzo ray directions nu_1..nu_6 of the hexagon's normal fan
NU_RAYS = {(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)}


# ---------------------------------------------------------------------------
# normal fans
# ---------------------------------------------------------------------------

def test_normal_fan_p2():
    assert set(P2_FAN.rays) == {(1, 0), (0, 1), (-1, -1)}
    assert len(P2_FAN.max_cones) == 3


def test_normal_fan_hexagon_rays():
    assert set(HEX_FAN.rays) == NU_RAYS
    assert len(HEX_FAN.max_cones) == 6


def test_normal_fan_square():
    square = convex_hull([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    fan = normal_fan(square)
    assert set(fan.rays) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert len(fan.max_cones) == 4  # P^1 x P^1


def test_normal_fan_equals_face_fan_of_dual():
    for verts in (P2_DELTA, HEX_NABLA, P3_DELTA):
        poly = convex_hull(verts)
        assert normal_fan(poly) == face_fan(polar_dual(poly))


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def test_p2_fan_predicates():
    assert is_smooth(P2_FAN) and is_complete(P2_FAN) and is_simplicial(P2_FAN)


def test_hexagon_fan_smooth_complete():
    assert is_smooth(HEX_FAN) and is_complete(HEX_FAN)


def test_determinant_two_cone_not_smooth():
    fan = make_fan([(1, 0), (0, 1), (-1, -2)],
                   [(0, 1), (1, 2), (0, 2)])
    assert is_complete(fan) and is_simplicial(fan)
    assert not is_smooth(fan)


def test_incomplete_fan():
    fan = make_fan([(1, 0), (0, 1)], [(0, 1)])
    assert not is_complete(fan)


def test_fan_validate_catalog():
    for fan in (P2_FAN, HEX_FAN):
        assert fan_validate(fan)


# ---------------------------------------------------------------------------
# MPCP
# ---------------------------------------------------------------------------

def test_mpcp_hexagon():
    fan, unimodular = mpcp_fan(convex_hull(HEX_NABLA))
    assert unimodular and is_smooth(fan) and is_complete(fan)
    assert set(fan.rays) == NU_RAYS
    assert len(fan.max_cones) == 6  # P^2 blown up at three points


def test_mpcp_p2_delta_is_plane_fan():
    fan, unimodular = mpcp_fan(convex_hull(P2_DELTA))
    assert unimodular
    assert fan == P2_FAN


def test_mpcp_p3_simplex_smooth():
    fan, unimodular = mpcp_fan(convex_hull(P3_DELTA))
    assert unimodular and is_smooth(fan)
    assert len(fan.max_cones) == 4


def test_mpcp_refines_face_fan_with_all_dual_points():
    poly = polar_dual(convex_hull(P2_DELTA))  # dual of the ray simplex
    fan, unimodular = mpcp_fan(poly)
    assert unimodular
    dual = polar_dual(poly)
    boundary = [p for p in lattice_points(dual) if p != (0, 0)]
    assert set(fan.rays) == set(boundary)
    assert len(fan.max_cones) == normalized_volume(dual)
    assert fan_validate(fan)


def test_mpcp_rejects_non_reflexive():
    with pytest.raises(DomainError):
        mpcp_fan(convex_hull([(0, 0), (1, 0), (0, 1)]))


def test_mpcp_non_unimodular_flag_4d():
    poly = convex_hull([(0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 0, 1),
                        (1, 1, 2, 1), (-1, -1, -1, -2)])
    assert is_reflexive(poly)
    _fan, unimodular = mpcp_fan(poly)
    assert not unimodular


# ---------------------------------------------------------------------------
# Hodge numbers
# ---------------------------------------------------------------------------

def test_hodge_p2():
    assert hodge_numbers_smooth_toric(P2_FAN) == ((1, 1, 1), 3)


def test_hodge_del_pezzo_six():
    assert hodge_numbers_smooth_toric(HEX_FAN) == ((1, 4, 1), 6)


def test_hodge_p3():
    fan = normal_fan(convex_hull(P3_DELTA))
    assert hodge_numbers_smooth_toric(fan) == ((1, 1, 1, 1), 4)


def test_hodge_rejects_non_smooth():
    fan = make_fan([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(SmoothnessError):
        hodge_numbers_smooth_toric(fan)


def test_hodge_palindromic_random():
    for fan in (P2_FAN, HEX_FAN, normal_fan(convex_hull(P3_DELTA))):
        h, chi = hodge_numbers_smooth_toric(fan)
        assert h == tuple(reversed(h))
        assert sum(h) == chi == len(fan.max_cones)


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

def test_divisor_polytope_anticanonical(p2_delta):
    assert divisor_polytope(anticanonical(P2_FAN)) == p2_delta


def test_divisor_polytope_single_ray():
    # D for the ray (-1,-1): the unit triangle (the degree-one column
    # group of the 4x9 golden GKZ matrix)
    ray_idx = P2_FAN.rays.index((-1, -1))
    coeffs = tuple(1 if i == ray_idx else 0 for i in range(3))
    poly = divisor_polytope(ToricDivisor(P2_FAN, coeffs))
    assert poly.vertices == ((0, 0), (0, 1), (1, 0))


def test_divisor_polytope_zero():
    poly = divisor_polytope(ToricDivisor(P2_FAN, (0, 0, 0)))
    assert poly.vertices == ((0, 0),)
    assert poly.dim == 0


def test_divisor_polytope_unbounded():
    fan = make_fan([(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(DomainError):
        divisor_polytope(ToricDivisor(fan, (1, 1)))


def test_divisor_polytope_non_nef_fallback():
    # twice a (-1)-curve on the del Pezzo surface: not nef, and |2E| has a
    # single section, so the polytope collapses to the origin
    ray = HEX_FAN.rays.index((1, 0))
    coeffs = tuple(2 if i == ray else 0 for i in range(6))
    divisor = ToricDivisor(HEX_FAN, coeffs)
    assert not is_nef(divisor)
    poly = divisor_polytope(divisor)
    assert poly.vertices == ((0, 0),)


def test_cartier_data_anticanonical(p2_delta):
    data = cartier_data(anticanonical(P2_FAN))
    assert set(data.per_cone) == set(p2_delta.vertices)


def test_cartier_data_zero_divisor():
    data = cartier_data(ToricDivisor(P2_FAN, (0, 0, 0)))
    assert set(data.per_cone) == {(0, 0)}


def test_cartier_data_bundle_h():
    # H on the bundle fan: (0,0,-1) on the infinity liftings and (m_tau, 0)
    # on the zero liftings, m_tau the Cartier data of D on the base
    ray_idx = P2_FAN.rays.index((1, 0))
    a = ToricDivisor(P2_FAN, tuple(1 if i == ray_idx else 0 for i in range(3)))
    base_data = set(cartier_data(a).per_cone)
    bundle = projective_bundle_fan(P2_FAN, a)
    h = bundle_nef_divisor(bundle, P2_FAN, a)
    values = set(cartier_data(h).per_cone)
    assert values == {(0, 0, -1)} | {m + (0,) for m in base_data}
    assert base_data == {(-1, 0), (0, 0), (-1, 1)}


def test_cartier_rejects_non_cartier():
    fan = make_fan([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    divisor = ToricDivisor(fan, (1, 0, 0))
    with pytest.raises(DomainError):
        cartier_data(divisor)


def test_nef_ample_anticanonical():
    mk = anticanonical(P2_FAN)
    assert is_nef(mk) and is_ample(mk)


# ---------------------------------------------------------------------------
# projective bundle and contraction
# ---------------------------------------------------------------------------

def test_bundle_fan_p1():
    a = ToricDivisor(P1_FAN, (1, 1))
    fan = projective_bundle_fan(P1_FAN, a)
    assert set(fan.rays) == {(1, 1), (-1, 1), (0, 1), (0, -1)}
    assert len(fan.max_cones) == 4
    # with all a_j = 1, 2H is anticanonical
    h = bundle_nef_divisor(fan, P1_FAN, a)
    two_h = ToricDivisor(fan, tuple(2 * c for c in h.coeffs))
    assert linearly_equivalent(two_h, anticanonical(fan))


def test_bundle_fan_p2():
    ray_idx = P2_FAN.rays.index((1, 0))
    a = ToricDivisor(P2_FAN, tuple(1 if i == ray_idx else 0 for i in range(3)))
    fan = projective_bundle_fan(P2_FAN, a)
    assert set(fan.rays) == {(1, 0, 1), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)}
    assert len(fan.max_cones) == 6
    assert is_smooth(fan) and is_complete(fan)
    assert fan_validate(fan)


def test_bundle_fan_trivial_is_product():
    a = ToricDivisor(P2_FAN, (0, 0, 0))
    fan = projective_bundle_fan(P2_FAN, a)
    expected = make_fan(
        [r + (0,) for r in P2_FAN.rays] + [(0, 0, 1), (0, 0, -1)],
        [cone + (3,) for cone in P2_FAN.max_cones]
        + [cone + (4,) for cone in P2_FAN.max_cones])
    assert fan == expected


def test_bundle_fan_rejects_negative():
    with pytest.raises(InputError):
        projective_bundle_fan(P2_FAN, ToricDivisor(P2_FAN, (-1, 0, 0)))


def test_contraction_to_p3_like_fan():
    ray_idx = P2_FAN.rays.index((1, 0))
    a = ToricDivisor(P2_FAN, tuple(1 if i == ray_idx else 0 for i in range(3)))
    bundle = projective_bundle_fan(P2_FAN, a)
    h = bundle_nef_divisor(bundle, P2_FAN, a)
    contracted = semiample_contraction(bundle, h)
    assert len(contracted.max_cones) == 4
    assert is_smooth(contracted) and is_complete(contracted) and is_fano(contracted)
    # a smooth complete toric 3-fold with 4 rays is projective 3-space
    assert len(contracted.rays) == 4
    p3_fan = normal_fan(convex_hull(P3_DELTA))
    assert gl_canonical_form(contracted) == gl_canonical_form(p3_fan)
    # the contraction merges exactly the three infinity liftings
    assert contracted == normal_fan(divisor_polytope(h))


def test_contraction_of_ample_is_identity():
    contracted = semiample_contraction(P2_FAN, anticanonical(P2_FAN))
    assert contracted == P2_FAN


def test_contraction_blowdown():
    blowup = make_fan([(1, 0), (0, 1), (-1, -1), (1, 1)],
                      [(0, 3), (1, 3), (1, 2), (0, 2)])
    assert is_smooth(blowup) and is_complete(blowup)
    hyperplane = divisor_polytope(ToricDivisor(P2_FAN, (1, 0, 0)))
    pullback = divisor_from_polytope(blowup, hyperplane)
    contracted = semiample_contraction(blowup, pullback)
    assert contracted == P2_FAN


def test_contraction_rejects_non_nef():
    ray = HEX_FAN.rays.index((1, 0))
    coeffs = tuple(2 if i == ray else 0 for i in range(6))
    with pytest.raises(DomainError):
        semiample_contraction(HEX_FAN, ToricDivisor(HEX_FAN, coeffs))


def test_fano_examples():
    assert is_fano(P2_FAN)
    assert is_fano(HEX_FAN)
    f2 = projective_bundle_fan(P1_FAN, ToricDivisor(P1_FAN, (2, 0)))
    assert is_nef(anticanonical(f2))      # Hirzebruch F_2 is semi-Fano
    assert not is_fano(f2)                # but -K is not strictly convex


def test_contracted_fano_anticanonical_multiple():
    ray_idx = P2_FAN.rays.index((1, 0))
    a = ToricDivisor(P2_FAN, tuple(1 if i == ray_idx else 0 for i in range(3)))
    bundle = projective_bundle_fan(P2_FAN, a)
    h = bundle_nef_divisor(bundle, P2_FAN, a)
    contracted = semiample_contraction(bundle, h)
    pushed = ToricDivisor(
        contracted,
        tuple(h.coeffs[bundle.rays.index(r)] for r in contracted.rays))
    four_h = ToricDivisor(contracted, tuple(4 * c for c in pushed.coeffs))
    witness = linear_equivalence_witness(four_h, anticanonical(contracted))
    assert witness is not None


# ---------------------------------------------------------------------------
# linear equivalence / Calabi-Yau condition
# ---------------------------------------------------------------------------

def test_equivalence_bundle_relation():
    a = ToricDivisor(P1_FAN, (1, 1))
    fan = projective_bundle_fan(P1_FAN, a)
    e0 = fan.rays.index((0, -1))
    d_e0 = ToricDivisor(fan, tuple(1 if i == e0 else 0 for i in range(4)))
    h = bundle_nef_divisor(fan, P1_FAN, a)
    assert linear_equivalence_witness(d_e0, h) == (0, 1)


def test_equivalence_reflexive():
    mk = anticanonical(P2_FAN)
    assert linear_equivalence_witness(mk, mk) == (0, 0)


def test_equivalence_hyperplanes():
    i1 = P2_FAN.rays.index((1, 0))
    i2 = P2_FAN.rays.index((0, 1))
    d1 = ToricDivisor(P2_FAN, tuple(1 if i == i1 else 0 for i in range(3)))
    d2 = ToricDivisor(P2_FAN, tuple(1 if i == i2 else 0 for i in range(3)))
    assert linear_equivalence_witness(d1, d2) == (-1, 1)


def test_not_equivalent():
    d1 = ToricDivisor(HEX_FAN, (1, 0, 0, 0, 0, 0))
    d2 = ToricDivisor(HEX_FAN, (0, 1, 0, 0, 0, 0))
    assert not linearly_equivalent(d1, d2)


def test_calabi_yau_cover_examples():
    assert is_calabi_yau_cover(P1_FAN, ToricDivisor(P1_FAN, (1, 1)), 2)
    p3_fan = normal_fan(convex_hull(P3_DELTA))
    deg2 = divisor_from_polytope(
        p3_fan, divisor_polytope(ToricDivisor(p3_fan, (1, 1, 0, 0))))
    assert is_calabi_yau_cover(p3_fan, deg2, 3)
    deg3 = anticanonical(P2_FAN)
    assert not is_calabi_yau_cover(P2_FAN, deg3, 3)
    with pytest.raises(InputError):
        is_calabi_yau_cover(P2_FAN, deg3, 1)


# ---------------------------------------------------------------------------
# round trips and serialization
# ---------------------------------------------------------------------------

def test_nef_divisor_polytope_roundtrip():
    for poly_verts in ([(0, 0), (1, 0), (0, 1)], P2_DELTA):
        poly = convex_hull(poly_verts)
        divisor = divisor_from_polytope(P2_FAN, poly)
        assert is_nef(divisor)
        assert divisor_polytope(divisor) == poly


def test_normal_fan_refines_divisor_normal_fan():
    # every cone of the fine fan sits inside a cone of the coarse one
    hyperplane = ToricDivisor(HEX_FAN, tuple(1 for _ in range(6)))
    coarse = normal_fan(divisor_polytope(hyperplane))
    for cone in HEX_FAN.max_cones:
        rays = HEX_FAN.cone_rays(cone)
        assert any(all(_in_cone(coarse, c, r) for r in rays)
                   for c in coarse.max_cones)


def _in_cone(fan, cone, vector):
    from nefmirror.lattice import cone_contains, make_cone
    return cone_contains(make_cone(fan.cone_rays(cone)), vector)


def test_fan_json_roundtrip():
    text = fan_to_json(HEX_FAN)
    assert fan_from_json(text) == HEX_FAN
    with pytest.raises(InputError):
        fan_from_json('{"dim": 2}')

"""Affine map and IFS container tests."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import fractops as ft
from fractops import (
    AffineMap2,
    NotContractiveError,
    SingularMapError,
    apply_map,
    compose,
    contraction_factor,
    default_probabilities,
    fixed_point,
    ifs_contraction,
    invert_map,
    validate_hyperbolic,
)

FERN_F1 = AffineMap2(0.85, -0.05, 0.125, 0.05, 0.85, -0.039)
FERN_F2 = AffineMap2(0.06, 0.02, 0.45, 0.0, 0.165, 0.835)
IDENTITY = AffineMap2(1, 0, 0, 0, 1, 0)
HALF = AffineMap2(0.5, 0, 0, 0, 0.5, 0)
DRAGON_F1 = AffineMap2(0.5, -0.5, -1.0, 0.5, 0.5, 0.0)

coef = st.floats(-0.9, 0.9, allow_nan=False, allow_infinity=False)


def test_apply_fern_f2_origin():
    assert apply_map(FERN_F2, (0.0, 0.0)) == pytest.approx((0.45, 0.835))


def test_apply_identity():
    assert apply_map(IDENTITY, (0.3, 0.7)) == (0.3, 0.7)


def test_apply_dragon_f1_origin():
    assert apply_map(DRAGON_F1, (0.0, 0.0)) == pytest.approx((-1.0, 0.0))


def test_invert_identity():
    assert invert_map(IDENTITY).coefficients() == pytest.approx(
        IDENTITY.coefficients()
    )


def test_invert_half_scaling():
    assert invert_map(HALF).coefficients() == pytest.approx((2, 0, 0, 0, 2, 0))


def test_invert_fern_f2_round_trip():
    inv = invert_map(FERN_F2)
    assert apply_map(inv, (0.45, 0.835)) == pytest.approx((0.0, 0.0), abs=1e-12)


def test_invert_singular_map():
    with pytest.raises(SingularMapError):
        invert_map(AffineMap2(1, 0, 0, 1, 0, 0))


def test_compose_matches_pointwise():
    g = compose(FERN_F1, FERN_F2)
    p = (0.3, -0.2)
    assert apply_map(g, p) == pytest.approx(apply_map(FERN_F1, apply_map(FERN_F2, p)))


def test_contraction_half():
    assert contraction_factor(HALF) == pytest.approx(0.5)


def test_contraction_dragon():
    assert contraction_factor(DRAGON_F1) == pytest.approx(math.sqrt(0.5))


def test_contraction_fern_f1():
    assert contraction_factor(FERN_F1) == pytest.approx(math.sqrt(0.725))


@given(coef, coef, coef, coef)
def test_contraction_is_largest_singular_value(a, b, d, e):
    m = AffineMap2(a, b, 0.0, d, e, 0.0)
    sv = np.linalg.svd(np.array([[a, b], [d, e]]), compute_uv=False)
    assert contraction_factor(m) == pytest.approx(float(sv[0]), abs=1e-12)


@given(coef, coef, coef, coef, coef, coef, st.floats(-2, 2), st.floats(-2, 2))
def test_invert_round_trip(a, b, c, d, e, l, x, y):
    m = AffineMap2(a, b, c, d, e, l)
    if abs(m.det()) < 1e-6:
        return
    p = apply_map(invert_map(m), apply_map(m, (x, y)))
    assert p == pytest.approx((x, y), abs=1e-6)


def test_fixed_point_fern_f1():
    fp = fixed_point(FERN_F1)
    assert apply_map(FERN_F1, fp) == pytest.approx(fp, abs=1e-12)
    assert fp == pytest.approx((0.828, 0.016), abs=1e-4)


def test_ifs_contraction_max_of_two():
    ifs = validate_hyperbolic(
        [HALF, AffineMap2(0.7, 0, 0.2, 0, 0.7, 0.1)], None, ft.UNIT_SQUARE
    )
    assert ifs_contraction(ifs) == pytest.approx(0.7)


def test_ifs_contraction_dragon():
    ifs = ft.dragon_ifs(0.5, 0.5)
    assert ifs_contraction(ifs) == pytest.approx(math.sqrt(0.5))


def test_ifs_contraction_fern(fern):
    assert ifs_contraction(fern) == pytest.approx(contraction_factor(FERN_F1))


def test_default_probabilities_proportional_to_det(fern):
    dets = np.array([abs(m.det()) for m in fern.maps])
    expected = dets / dets.sum()
    assert np.allclose(fern.probabilities, expected)


def test_default_probabilities_triangle_quarters():
    tri = ft.triangle_family(ft.TriangleSpec(0.5, 0.5, 0.5))
    for m in tri.maps:
        assert abs(m.det()) == pytest.approx(0.25)
    assert np.allclose(tri.probabilities, 0.25)


def test_not_contractive_rejected():
    with pytest.raises(NotContractiveError):
        validate_hyperbolic([IDENTITY], None, ft.UNIT_SQUARE)


def test_non_invertible_rejected():
    with pytest.raises(SingularMapError):
        validate_hyperbolic(
            [AffineMap2(0.5, 0, 0, 0.5, 0, 0)], None, ft.UNIT_SQUARE
        )

"""Rendering, address evaluation, and mask diagnostics tests."""

import numpy as np
import pytest

import fractops as ft
from fractops import (
    AttractorMask,
    EmptyMaskError,
    PixelGrid,
    RenderBudgetError,
    chaos_points,
    hausdorff_pixels,
    mask_membership,
    phi_eval,
    phi_eval_batch,
    render_adaptive,
    render_chaos,
    render_deterministic,
    required_depth,
)
from fractops.raster import dilate


def test_phi_fern_all_ones_hits_f1_fixed_point(fern):
    pt, radius = phi_eval(fern, (1,) * 60)
    assert radius < 1e-4
    assert pt == pytest.approx((0.828, 0.016), abs=1e-4)


def test_phi_fern_all_twos(fern):
    pt, _ = phi_eval(fern, (2,) * 60)
    assert pt == pytest.approx((0.5, 1.0), abs=1e-6)


def test_phi_fern_one_then_twos(fern):
    pt, _ = phi_eval(fern, (1,) + (2,) * 60)
    assert pt == pytest.approx((0.5, 0.836), abs=1e-6)


def test_phi_dragon_all_ones():
    dragon = ft.dragon_ifs(0.5, 0.5)
    pt, _ = phi_eval(dragon, (1,) * 80)
    assert pt == pytest.approx((-1.0, -1.0), abs=1e-9)


def test_phi_radius_decays(fern):
    _, r3 = phi_eval(fern, (1, 2, 3))
    _, r4 = phi_eval(fern, (1, 2, 3, 4))
    assert 0 < r4 < r3


def test_phi_batch_matches_scalar(fern):
    syms = np.array([[1, 2, 3, 4], [2, 2, 2, 2], [4, 1, 3, 1]], dtype=np.uint8)
    pts = phi_eval_batch(fern, syms)
    for row, want in zip(syms, pts):
        got, _ = phi_eval(fern, tuple(int(s) for s in row))
        assert got == pytest.approx(tuple(want))


def test_required_depth_is_sufficient():
    tri = ft.triangle_family(ft.TriangleSpec(0.5, 0.5, 0.5))
    grid = PixelGrid(64, 64, tri.viewport)
    k = required_depth(tri, grid)
    m1 = render_deterministic(tri, k, grid)
    m2 = render_deterministic(tri, k + 1, grid)
    assert np.array_equal(m1.bits, m2.bits)


def test_render_budget_error():
    fern = ft.fern_ifs()
    with pytest.raises(RenderBudgetError) as exc:
        render_deterministic(fern, 40, PixelGrid(64, 64, fern.viewport))
    assert exc.value.required_depth is not None


def test_single_map_attractor_is_one_point():
    ifs = ft.validate_hyperbolic(
        [ft.AffineMap2(0.5, 0, 0, 0, 0.5, 0)], None, ft.UNIT_SQUARE
    )
    grid = PixelGrid(64, 64, ft.UNIT_SQUARE)
    mask = render_adaptive(ifs, grid)
    iy, ix = np.nonzero(mask.bits)
    # fixed point (0, 0) sits on the viewport corner
    assert mask.count() <= 4
    assert ix.max() <= 1 and iy.max() <= 1


def test_filled_triangle_attractor():
    tri = ft.triangle_family(ft.TriangleSpec(0.5, 0.5, 0.5))
    grid = PixelGrid(128, 128, tri.viewport)
    mask = render_adaptive(tri, grid)
    xs, ys = grid.centers()[:, 0], grid.centers()[:, 1]
    # every pixel center strictly inside the triangle, 1px margin
    pitch = max(grid.pitch_x, grid.pitch_y)
    inside = (
        (ys > 2 * pitch)
        & (ys < 2 * xs - 2 * pitch)
        & (ys < 2 * (1 - xs) - 2 * pitch)
    )
    covered = dilate(mask.bits, 1).reshape(-1)
    assert covered[inside].all()


def test_chaos_deterministic(fern, fern_grid):
    m1 = render_chaos(fern, 50_000, 7, fern_grid)
    m2 = render_chaos(fern, 50_000, 7, fern_grid)
    assert np.array_equal(m1.bits, m2.bits)
    m3 = render_chaos(fern, 50_000, 8, fern_grid)
    assert not np.array_equal(m1.bits, m3.bits)


def test_chaos_burn_in_only_mask(fern, fern_grid):
    mask = render_chaos(fern, 100, 3, fern_grid, burn_in=100)
    assert mask.count() == 0
    with pytest.raises(ValueError):
        render_chaos(fern, 50, 3, fern_grid, burn_in=100)


def test_chaos_points_shape_and_determinism(fern):
    pts = chaos_points(fern, 1000, 5)
    assert pts.shape == (1000, 2)
    assert np.array_equal(pts, chaos_points(fern, 1000, 5))


def test_chaos_matches_deterministic_render(fern, fern_grid, fern_partition):
    chaos = render_chaos(fern, 2_000_000, 1, fern_grid)
    pitch = max(fern_grid.pitch_x, fern_grid.pitch_y)
    assert hausdorff_pixels(chaos, fern_partition.attractor) <= 2 * pitch


def test_hausdorff_identical_masks(fern_partition):
    assert hausdorff_pixels(fern_partition.attractor, fern_partition.attractor) == 0.0


def test_hausdorff_two_pixels():
    grid = PixelGrid(16, 16, ft.UNIT_SQUARE)
    b1 = np.zeros((16, 16), dtype=bool)
    b2 = np.zeros((16, 16), dtype=bool)
    b1[4, 3] = True
    b2[4, 8] = True
    got = hausdorff_pixels(AttractorMask(grid, b1), AttractorMask(grid, b2))
    assert got == pytest.approx(5 * grid.pitch_x)


def test_hausdorff_empty_mask_rejected(fern_partition):
    grid = fern_partition.attractor.grid
    empty = AttractorMask(grid, np.zeros_like(fern_partition.attractor.bits))
    with pytest.raises(EmptyMaskError):
        hausdorff_pixels(fern_partition.attractor, empty)


def test_mask_membership(fern_partition, fern):
    mask = fern_partition.attractor
    tip, _ = phi_eval(fern, (1,) * 60)
    assert mask_membership(mask, tip)
    # far outside the leaf on the same row
    assert not mask_membership(mask, (fern.viewport.xmin, tip[1]))
    # outside the viewport entirely
    assert not mask_membership(mask, (99.0, 99.0))
    # dilation widens acceptance by whole pixels
    off = (tip[0] + 2.5 * mask.grid.pitch_x, tip[1])
    assert not mask_membership(mask, off, dilation=0)
    assert mask_membership(mask, off, dilation=3)

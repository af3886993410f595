"""Rasterization: address evaluation, attractor rendering, Hausdorff
distances between pixel masks.

Pixel (ix, iy) maps to the viewport point at the pixel center, with row 0
at the viewport's minimum y.  Binning is half-open except that points
exactly on the max edge land in the last bin, so every point of the
closed viewport has a pixel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .codespace import Prefix
from .ifs import IFS, Point, Viewport, ifs_contraction
from . import _kernels

#: Fixed-depth deterministic rendering refuses more than this many points.
POINT_BUDGET = 10**8

DEFAULT_BURN_IN = 100


class RenderBudgetError(RuntimeError):
    """Deterministic render would exceed the point budget."""

    def __init__(self, msg, required_depth=None):
        super().__init__(msg)
        self.required_depth = required_depth


class EmptyMaskError(ValueError):
    """Operation needs a nonempty mask."""


@dataclass(frozen=True)
class PixelGrid:
    width: int
    height: int
    viewport: Viewport

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if self.width * self.height > 2**31:
            raise ValueError("grid too large")

    @property
    def pitch_x(self) -> float:
        return self.viewport.width / self.width

    @property
    def pitch_y(self) -> float:
        return self.viewport.height / self.height

    def pixel_indices(self, pts: np.ndarray, slack_px: float = 0.0):
        """Map (S, 2) points to (ix, iy, valid) arrays.

        Points up to slack_px pixels outside the viewport are clamped to
        the border pixel; anything further out is flagged invalid.
        """
        vp = self.viewport
        fx = (pts[:, 0] - vp.xmin) / self.pitch_x
        fy = (pts[:, 1] - vp.ymin) / self.pitch_y
        valid = (
            (fx >= -slack_px)
            & (fx <= self.width + slack_px)
            & (fy >= -slack_px)
            & (fy <= self.height + slack_px)
        )
        ix = np.clip(np.floor(fx).astype(np.int64), 0, self.width - 1)
        iy = np.clip(np.floor(fy).astype(np.int64), 0, self.height - 1)
        return ix, iy, valid

    def pixel_of(self, p: Point):
        """Pixel (ix, iy) of a single point, or None when outside."""
        pts = np.array([[p[0], p[1]]], dtype=np.float64)
        ix, iy, valid = self.pixel_indices(pts)
        if not valid[0]:
            return None
        return int(ix[0]), int(iy[0])

    def centers(self, bits: np.ndarray | None = None) -> np.ndarray:
        """(S, 2) centers of all pixels, or of the set pixels of a mask."""
        if bits is None:
            iy, ix = np.mgrid[0 : self.height, 0 : self.width]
            iy = iy.ravel()
            ix = ix.ravel()
        else:
            iy, ix = np.nonzero(bits)
        x = self.viewport.xmin + (ix + 0.5) * self.pitch_x
        y = self.viewport.ymin + (iy + 0.5) * self.pitch_y
        return np.column_stack([x, y])


@dataclass
class AttractorMask:
    grid: PixelGrid
    bits: np.ndarray  # (height, width) bool

    def count(self) -> int:
        return int(self.bits.sum())


@dataclass
class RasterPicture:
    grid: PixelGrid
    pixels: np.ndarray  # (height, width, 3) uint8
    coverage: np.ndarray  # (height, width) bool

    @classmethod
    def blank(cls, grid: PixelGrid) -> "RasterPicture":
        return cls(
            grid=grid,
            pixels=np.zeros((grid.height, grid.width, 3), dtype=np.uint8),
            coverage=np.zeros((grid.height, grid.width), dtype=bool),
        )


def rasterize(pts: np.ndarray, grid: PixelGrid, bits: np.ndarray | None = None) -> np.ndarray:
    if bits is None:
        bits = np.zeros((grid.height, grid.width), dtype=bool)
    ix, iy, valid = grid.pixel_indices(pts)
    bits[iy[valid], ix[valid]] = True
    return bits


def phi_eval(ifs: IFS, prefix: Prefix, x0: Point | None = None) -> tuple[Point, float]:
    """Evaluate the composed maps of a prefix at x0 (default: viewport
    center).

    Returns the image point and the guaranteed error radius
    l**len(prefix) * diam(viewport) bounding its distance from the limit
    point of the one-padded address.
    """
    if x0 is None:
        x0 = ifs.viewport.center()
    x, y = x0
    for s in reversed(prefix):
        m = ifs.maps[s - 1]
        x, y = m.a * x + m.b * y + m.c, m.d * x + m.e * y + m.l
    radius = ifs_contraction(ifs) ** len(prefix) * ifs.viewport.diameter()
    return (x, y), radius


def phi_eval_batch(ifs: IFS, syms: np.ndarray, x0: Point | None = None) -> np.ndarray:
    """Vectorized phi_eval over an (S, depth) array of 1-based symbols.

    Applies the maps innermost-first, so row i evaluates the composition
    f[syms[i,0]] o ... o f[syms[i,depth-1]] at x0.
    """
    if x0 is None:
        x0 = ifs.viewport.center()
    coefs = ifs.coefficient_array()
    s_count, depth = syms.shape
    x = np.full(s_count, x0[0], dtype=np.float64)
    y = np.full(s_count, x0[1], dtype=np.float64)
    for j in range(depth - 1, -1, -1):
        idx = syms[:, j].astype(np.intp) - 1
        a, b, c, d, e, l = (coefs[idx, k] for k in range(6))
        x, y = a * x + b * y + c, d * x + e * y + l
    return np.column_stack([x, y])


def required_depth(ifs: IFS, grid: PixelGrid) -> int:
    """Smallest K with l**K * diam(viewport) below one pixel pitch."""
    l = ifs_contraction(ifs)
    tol = min(grid.pitch_x, grid.pitch_y)
    return max(1, math.ceil(math.log(tol / ifs.viewport.diameter()) / math.log(l)))


def deterministic_points(ifs: IFS, depth: int, x0: Point | None = None) -> np.ndarray:
    """All N**depth composed images of x0, ordered depth-first with the
    leading symbol outermost and symbols increasing."""
    if x0 is None:
        x0 = ifs.viewport.center()
    pts = np.array([x0], dtype=np.float64)
    for _ in range(depth):
        pts = np.concatenate(
            [ifs.apply_batch(n, pts) for n in range(1, ifs.n_maps + 1)]
        )
    return pts


def render_deterministic(ifs: IFS, depth: int, grid: PixelGrid) -> AttractorMask:
    """Fixed-depth deterministic render: plot every composition of length
    `depth` applied to the viewport center."""
    if ifs.n_maps**depth > POINT_BUDGET:
        need = required_depth(ifs, grid)
        raise RenderBudgetError(
            f"N**K = {ifs.n_maps}**{depth} exceeds the {POINT_BUDGET} point "
            f"budget (pixel-resolution convergence needs K = {need})",
            required_depth=need,
        )
    bits = np.zeros((grid.height, grid.width), dtype=bool)
    if depth == 0:
        pts = deterministic_points(ifs, 0)
        rasterize(pts, grid, bits)
    else:
        pts = deterministic_points(ifs, depth - 1)
        for n in range(1, ifs.n_maps + 1):
            rasterize(ifs.apply_batch(n, pts), grid, bits)
    return AttractorMask(grid=grid, bits=bits)


def _singular_values(comps: np.ndarray) -> np.ndarray:
    a, b, d, e = comps[:, 0], comps[:, 1], comps[:, 3], comps[:, 4]
    q1 = a * a + b * b + d * d + e * e
    q2 = np.hypot(a * a + b * b - d * d - e * e, 2.0 * (a * d + b * e))
    return np.sqrt(0.5 * (q1 + q2))


def _compose_batch(comps: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """Compose every row g of comps with a single map f: rows of g o f."""
    a, b, c, d, e, l = coef
    out = np.empty_like(comps)
    ga, gb, gc, gd, ge, gl = (comps[:, k] for k in range(6))
    out[:, 0] = ga * a + gb * d
    out[:, 1] = ga * b + gb * e
    out[:, 2] = ga * c + gb * l + gc
    out[:, 3] = gd * a + ge * d
    out[:, 4] = gd * b + ge * e
    out[:, 5] = gd * c + ge * l + gl
    return out


def render_adaptive(
    ifs: IFS,
    grid: PixelGrid,
    tol_px: float = 0.75,
    max_depth: int = 96,
    max_active: int = 20_000_000,
) -> AttractorMask:
    """Pixel-converged deterministic render by cylinder subdivision.

    Subdivides map compositions until the composed contraction times the
    viewport diameter drops below tol_px pixels (or the whole cylinder
    image fits in a 2x2 pixel block), plotting one point per leaf, so
    every attractor point lies within about two pixels of a set pixel.
    The mask is pre-seeded with a fixed-seed chaos orbit (exact attractor
    points); branches whose bounding box touches no needy pixel (an unset
    pixel with no set neighbor) are pruned, which cannot push any
    attractor point farther than one pixel from a set pixel.
    """
    vp = ifs.viewport
    diam = vp.diameter()
    tol_units = tol_px * max(grid.pitch_x, grid.pitch_y)
    cx, cy = vp.center()
    coefs = ifs.coefficient_array()
    corners = np.array(
        [[vp.xmin, vp.ymin], [vp.xmin, vp.ymax], [vp.xmax, vp.ymin], [vp.xmax, vp.ymax]]
    )
    prefill = min(20 * grid.width * grid.height, 10_000_000)
    bits = render_chaos(ifs, prefill, seed=0, grid=grid).bits
    comps = np.array([[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]])
    for level in range(max_depth + 1):
        if comps.size == 0:
            break
        svs = _singular_values(comps)
        lo, hi = _bboxes(comps, corners)
        tiny = (
            (hi[:, 0] - lo[:, 0] <= 2.0 * grid.pitch_x)
            & (hi[:, 1] - lo[:, 1] <= 2.0 * grid.pitch_y)
        )
        leaf = (svs * diam <= tol_units) | tiny | (level == max_depth)
        if leaf.any():
            rows = comps[leaf & ~tiny]
            pts = np.column_stack(
                [
                    rows[:, 0] * cx + rows[:, 1] * cy + rows[:, 2],
                    rows[:, 3] * cx + rows[:, 4] * cy + rows[:, 5],
                ]
            )
            rasterize(pts, grid, bits)
            # tiny-bbox leaves: the whole cylinder image fits a 2x2 pixel
            # block, so its midpoint pins the attractor piece to ~1 pixel
            rasterize(0.5 * (lo[tiny] + hi[tiny]), grid, bits)
        keep = ~leaf
        comps = comps[keep]
        if comps.size == 0:
            break
        needy = ~dilate(bits, 1)
        comps = comps[_touches(lo[keep], hi[keep], grid, needy)]
        if len(comps) * ifs.n_maps > max_active:
            raise RenderBudgetError(
                f"adaptive render exceeded {max_active} active branches"
            )
        comps = np.concatenate(
            [_compose_batch(comps, coefs[n]) for n in range(ifs.n_maps)]
        )
    return AttractorMask(grid=grid, bits=bits)


def _bboxes(comps: np.ndarray, corners: np.ndarray):
    """Axis-aligned bounds of each composition's viewport image."""
    xs = comps[:, 0, None] * corners[:, 0] + comps[:, 1, None] * corners[:, 1] + comps[:, 2, None]
    ys = comps[:, 3, None] * corners[:, 0] + comps[:, 4, None] * corners[:, 1] + comps[:, 5, None]
    lo = np.column_stack([xs.min(axis=1), ys.min(axis=1)])
    hi = np.column_stack([xs.max(axis=1), ys.max(axis=1)])
    return lo, hi


def _touches(lo, hi, grid: PixelGrid, needy) -> np.ndarray:
    """Boolean keep-mask: branches whose viewport-image bounding box
    touches at least one needy pixel."""
    vp = grid.viewport
    x0 = np.floor((lo[:, 0] - vp.xmin) / grid.pitch_x).astype(np.int64)
    x1 = np.floor((hi[:, 0] - vp.xmin) / grid.pitch_x).astype(np.int64)
    y0 = np.floor((lo[:, 1] - vp.ymin) / grid.pitch_y).astype(np.int64)
    y1 = np.floor((hi[:, 1] - vp.ymin) / grid.pitch_y).astype(np.int64)
    x0c = np.clip(x0, 0, grid.width - 1)
    x1c = np.clip(x1, 0, grid.width - 1)
    y0c = np.clip(y0, 0, grid.height - 1)
    y1c = np.clip(y1, 0, grid.height - 1)
    # summed-area table of needy pixels, padded by a zero row and column
    sat = np.zeros((grid.height + 1, grid.width + 1), dtype=np.int64)
    np.cumsum(np.cumsum(needy, axis=0), axis=1, out=sat[1:, 1:])
    count = (
        sat[y1c + 1, x1c + 1]
        - sat[y0c, x1c + 1]
        - sat[y1c + 1, x0c]
        + sat[y0c, x0c]
    )
    return count > 0


def render_chaos(
    ifs: IFS,
    iterations: int,
    seed: int,
    grid: PixelGrid,
    burn_in: int = DEFAULT_BURN_IN,
) -> AttractorMask:
    """Random-iteration render; deterministic given (seed, iterations).

    Points are plotted for steps k > burn_in only.
    """
    if iterations < burn_in:
        raise ValueError("iterations must be at least burn_in")
    bits = np.zeros((grid.height, grid.width), dtype=np.bool_)
    vp = ifs.viewport
    cx, cy = vp.center()
    _kernels.chaos_mask(
        ifs.coefficient_array(),
        ifs.cumulative_probabilities(),
        np.uint64(seed),
        iterations,
        burn_in,
        cx,
        cy,
        vp.xmin,
        vp.ymin,
        grid.pitch_x,
        grid.pitch_y,
        grid.width,
        grid.height,
        bits,
    )
    return AttractorMask(grid=grid, bits=bits)


def chaos_points(ifs: IFS, count: int, seed: int, burn_in: int = DEFAULT_BURN_IN) -> np.ndarray:
    """(count, 2) random-orbit points, taken after burn-in."""
    vp = ifs.viewport
    cx, cy = vp.center()
    return _kernels.chaos_points(
        ifs.coefficient_array(),
        ifs.cumulative_probabilities(),
        np.uint64(seed),
        count,
        burn_in,
        cx,
        cy,
    )


def hausdorff_pixels(m1: AttractorMask, m2: AttractorMask) -> float:
    """Symmetric Hausdorff distance between the set-pixel centers of two
    masks on the same grid, in viewport units (exact, via Euclidean
    distance transforms)."""
    if m1.grid != m2.grid:
        raise ValueError("masks must share a grid")
    if not m1.bits.any() or not m2.bits.any():
        raise EmptyMaskError("Hausdorff distance needs nonempty masks")
    sampling = (m1.grid.pitch_y, m1.grid.pitch_x)
    d_to_2 = ndimage.distance_transform_edt(~m2.bits, sampling=sampling)
    d_to_1 = ndimage.distance_transform_edt(~m1.bits, sampling=sampling)
    return float(max(d_to_2[m1.bits].max(), d_to_1[m2.bits].max()))


def dilate(bits: np.ndarray, radius: int) -> np.ndarray:
    """Chebyshev dilation by `radius` pixels."""
    if radius <= 0:
        return bits
    size = 2 * radius + 1
    return ndimage.binary_dilation(bits, structure=np.ones((size, size), dtype=bool))


def mask_membership(mask: AttractorMask, pt: Point, dilation: int = 0) -> bool:
    """True iff a set bit lies within Chebyshev distance `dilation` of
    pt's pixel; False for points outside the viewport."""
    if dilation < 0:
        raise ValueError("dilation must be >= 0")
    loc = mask.grid.pixel_of(pt)
    if loc is None:
        return False
    ix, iy = loc
    y0 = max(0, iy - dilation)
    y1 = min(mask.grid.height, iy + dilation + 1)
    x0 = max(0, ix - dilation)
    x1 = min(mask.grid.width, ix + dilation + 1)
    return bool(mask.bits[y0:y1, x0:x1].any())


def image_masks(ifs: IFS, attractor: AttractorMask) -> list[np.ndarray]:
    """Pixel masks of each map's image of the attractor, rasterized from
    the attractor mask's pixel centers (contractive maps keep the center
    cloud sub-pixel dense)."""
    pts = attractor.grid.centers(attractor.bits)
    return [
        rasterize(ifs.apply_batch(n, pts), attractor.grid)
        for n in range(1, ifs.n_maps + 1)
    ]

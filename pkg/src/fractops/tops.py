"""Tops dynamical system: domain partition, itineraries, backwards-orbit
address enumeration, and an itinerary-complexity estimate.

The partition cells are pixel masks: D_1 is the rasterized f_1(A) and
each later D_n is f_n(A) minus all earlier cells, so least index wins on
overlaps.  Smaller symbols give greater addresses under the tops
ordering, so this picks the tops itinerary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from scipy import ndimage

from .codespace import Prefix
from .ifs import IFS, Point, contraction_factor
from .raster import (
    AttractorMask,
    PixelGrid,
    chaos_points,
    dilate,
    image_masks,
    render_adaptive,
    render_deterministic,
)

BRANCH_LIMIT = 4096


class OffAttractorError(ValueError):
    """Query point is not on the attractor mask (after 1-pixel dilation)."""


class BranchLimitError(RuntimeError):
    """Backwards-orbit enumeration exceeded the branch cap."""


@dataclass
class DomainPartition:
    ifs: IFS
    grid: PixelGrid
    attractor: AttractorMask
    cells: list[np.ndarray]  # disjoint bool masks, union = attractor bits
    image_bits: list[np.ndarray]  # rasterized f_n(A), before subtraction
    cell_index: np.ndarray  # (H, W) int16, 0-based map index, -1 off mask
    fallback_index: np.ndarray  # least cell within 1 pixel, -1 if none
    boundary: np.ndarray  # (H, W) bool: within 1 pixel of >= 2 cells
    attr_edt: np.ndarray  # (H, W) distance to the attractor, world units
    near_iy: np.ndarray  # (H, W) nearest attractor pixel row
    near_ix: np.ndarray  # (H, W) nearest attractor pixel column


@dataclass
class Itinerary:
    prefix: Prefix
    terminal: Point
    boundary_flag: bool


def build_partition(
    ifs: IFS, grid: PixelGrid, render_depth: int | None = None
) -> DomainPartition:
    """Render the attractor and split it into the tops domain cells.

    With render_depth None the attractor is rendered adaptively to pixel
    convergence; otherwise by fixed-depth deterministic iteration.
    """
    if render_depth is None:
        attractor = render_adaptive(ifs, grid)
    else:
        attractor = render_deterministic(ifs, render_depth, grid)
    images = image_masks(ifs, attractor)
    cell_index = np.full((grid.height, grid.width), -1, dtype=np.int16)
    cells = []
    for n, img in enumerate(images):
        cell = img & attractor.bits & (cell_index < 0)
        cell_index[cell] = n
        cells.append(cell)
    # rasterization drift can leave stray attractor pixels outside every
    # image mask; claim them by proximity so the cells cover the mask
    for radius in (1, 2, 3):
        stray = attractor.bits & (cell_index < 0)
        if not stray.any():
            break
        for n, img in enumerate(images):
            claim = stray & dilate(img, radius) & (cell_index < 0)
            cell_index[claim] = n
            cells[n] |= claim
    stray = attractor.bits & (cell_index < 0)
    if stray.any():
        cell_index[stray] = 0
        cells[0] |= stray
    dilated = [dilate(c, 1) for c in cells]
    fallback_index = np.full_like(cell_index, -1)
    for n in range(len(cells) - 1, -1, -1):
        fallback_index[dilated[n]] = n
    boundary = np.sum(dilated, axis=0) >= 2
    attr_edt, (near_iy, near_ix) = ndimage.distance_transform_edt(
        ~attractor.bits,
        sampling=(grid.pitch_y, grid.pitch_x),
        return_indices=True,
    )
    return DomainPartition(
        ifs=ifs,
        grid=grid,
        attractor=attractor,
        cells=cells,
        image_bits=images,
        cell_index=cell_index,
        fallback_index=fallback_index,
        boundary=boundary,
        attr_edt=attr_edt,
        near_iy=near_iy,
        near_ix=near_ix,
    )


def _lookup(part: DomainPartition, pts: np.ndarray):
    """Per point: 0-based cell index (-1 when off), boundary-proximity
    flag.  Points up to 1 pixel outside the viewport are clamped."""
    ix, iy, valid = part.grid.pixel_indices(pts, slack_px=1.0)
    idx = np.full(len(pts), -1, dtype=np.int16)
    near = np.zeros(len(pts), dtype=bool)
    idx[valid] = part.cell_index[iy[valid], ix[valid]]
    fb = valid & (idx < 0)
    idx[fb] = part.fallback_index[iy[fb], ix[fb]]
    near[valid] = part.boundary[iy[valid], ix[valid]]
    return idx, near


def tops_step(part: DomainPartition, x: Point) -> tuple[int, Point]:
    """One step of the tops dynamical system: the least n whose cell
    holds x's pixel (falling back to 1-pixel dilation), and f_n^-1(x)."""
    pts = np.array([[x[0], x[1]]], dtype=np.float64)
    idx, _ = _lookup(part, pts)
    if idx[0] < 0:
        raise OffAttractorError(f"point {x} is off the attractor mask")
    n = int(idx[0]) + 1
    inv = part.ifs.inverse_coefficient_array()[n - 1]
    return n, (
        inv[0] * x[0] + inv[1] * x[1] + inv[2],
        inv[3] * x[0] + inv[4] * x[1] + inv[5],
    )


def tops_orbit(part: DomainPartition, x: Point, depth: int) -> Itinerary:
    """Depth-d itinerary of x under the tops dynamical system; the
    recorded prefix approximates the tops address of x."""
    syms, flags, ok, pts, _ = tops_orbits_batch(
        part, np.array([[x[0], x[1]]], dtype=np.float64), depth
    )
    if not ok[0]:
        raise OffAttractorError(f"orbit of {x} left the attractor mask")
    return Itinerary(
        prefix=tuple(int(s) for s in syms[0]),
        terminal=(float(pts[0, 0]), float(pts[0, 1])),
        boundary_flag=bool(flags[0]),
    )


def tops_orbits_batch(part: DomainPartition, pts: np.ndarray, depth: int):
    """Vectorized tops orbits.

    Returns (symbols (S, depth) uint8, boundary_flags (S,), ok (S,),
    terminals (S, 2), drift (S,)); rows with ok False left the mask and
    carry zero symbols from that step on.

    Starting points must lie on the (1-pixel dilated) attractor mask.
    Inverse maps expand the quantization error of approximate inputs, so
    orbit points that drift off the mask mid-orbit are snapped to the
    nearest attractor pixel center when within the one-step drift bound
    (flagged as boundary-ambiguous when the snap exceeds a pixel);
    farther drift marks the row not ok.  drift accumulates each snap
    distance weighted by the contraction of the symbols already spelled,
    bounding how far the address's phi image can sit from the input.
    """
    inv = part.ifs.inverse_coefficient_array()
    grid = part.grid
    pitch = max(grid.pitch_x, grid.pitch_y)
    # worst-case one-step drift growth of f_n^-1 is 1/s_min(f_n)
    s_max_arr = np.array(
        [contraction_factor(m) for m in part.ifs.maps], dtype=np.float64
    )
    s_min = np.array(
        [abs(m.det()) for m in part.ifs.maps], dtype=np.float64
    ) / s_max_arr
    cur = np.array(pts, dtype=np.float64, copy=True)
    s_count = len(cur)
    syms = np.zeros((s_count, depth), dtype=np.uint8)
    flags = np.zeros(s_count, dtype=bool)
    ok = np.ones(s_count, dtype=bool)
    scale = np.ones(s_count, dtype=np.float64)
    drift = np.zeros(s_count, dtype=np.float64)
    for step in range(depth):
        idx, near = _lookup(part, cur)
        if step > 0:
            lost = ok & (idx < 0)
            if lost.any():
                radius = 3.0 * pitch / s_min[syms[lost, step - 1] - 1]
                jx, jy, valid = grid.pixel_indices(
                    cur[lost], slack_px=float(radius.max()) / pitch + 1.0
                )
                dist = np.full(int(lost.sum()), np.inf)
                dist[valid] = part.attr_edt[jy[valid], jx[valid]]
                within = dist <= radius
                rows = np.nonzero(lost)[0][within]
                if len(rows):
                    cy = part.near_iy[jy[within], jx[within]]
                    cx = part.near_ix[jy[within], jx[within]]
                    cur[rows, 0] = grid.viewport.xmin + (cx + 0.5) * grid.pitch_x
                    cur[rows, 1] = grid.viewport.ymin + (cy + 0.5) * grid.pitch_y
                    # subpixel snaps are ordinary mask-edge quantization,
                    # the same class the 1-pixel lookup fallback absorbs
                    flags[rows] |= dist[within] > pitch
                    drift[rows] += scale[rows] * dist[within]
                    idx[rows], near[rows] = _lookup(part, cur[rows])
        ok &= idx >= 0
        flags |= near & ok
        use = np.where(ok, idx, 0).astype(np.intp)
        syms[:, step] = np.where(ok, use + 1, 0)
        scale = np.where(ok, scale * s_max_arr[use], scale)
        a, b, c, d, e, l = (inv[use, k] for k in range(6))
        nx = a * cur[:, 0] + b * cur[:, 1] + c
        ny = d * cur[:, 0] + e * cur[:, 1] + l
        cur[:, 0] = np.where(ok, nx, cur[:, 0])
        cur[:, 1] = np.where(ok, ny, cur[:, 1])
    return syms, flags, ok, cur, drift


@dataclass
class _EnumContext:
    dilated: np.ndarray
    edt: np.ndarray
    near_iy: np.ndarray
    near_ix: np.ndarray
    s_max: np.ndarray
    inv: np.ndarray


def _enum_context(
    ifs: IFS, images: list[AttractorMask] | list[np.ndarray], grid: PixelGrid
) -> _EnumContext:
    bits = [im.bits if isinstance(im, AttractorMask) else im for im in images]
    dilated = np.stack([dilate(b, 1) for b in bits])
    union = np.logical_or.reduce(bits)
    edt, (near_iy, near_ix) = ndimage.distance_transform_edt(
        ~union, sampling=(grid.pitch_y, grid.pitch_x), return_indices=True
    )
    s_max = np.array([contraction_factor(m) for m in ifs.maps], dtype=np.float64)
    return _EnumContext(
        dilated, edt, near_iy, near_ix, s_max, ifs.inverse_coefficient_array()
    )


def enumerate_addresses(
    ifs: IFS,
    images: list[AttractorMask] | list[np.ndarray],
    grid: PixelGrid,
    x: Point,
    depth: int,
    max_count: int = BRANCH_LIMIT,
    context: _EnumContext | None = None,
) -> set[Prefix]:
    """All depth-d address prefixes of x, by branching backwards orbits.

    At every step the orbit branches on each n whose (1-pixel dilated)
    f_n(A) mask contains the current pixel, then applies f_n^-1.  Each
    inverse expands the pixel-level uncertainty, so the preimage is
    snapped back to the nearest attractor pixel center when it lies
    within a one-step tolerance of 2 pixels / s_max(f_n); a branch whose
    preimage drifts farther off the attractor is dropped as
    inadmissible.  Snapping keeps the per-step error from compounding.

    context caches the mask-derived lookups across calls; pass the
    result of a prior enumeration setup via _enum_context for bulk use.
    """
    if max_count < 1:
        raise ValueError("max_count must be >= 1")
    if context is None:
        context = _enum_context(ifs, images, grid)
    dilated, edt = context.dilated, context.edt
    near_iy, near_ix = context.near_iy, context.near_ix
    s_max, inv = context.s_max, context.inv
    pitch = max(grid.pitch_x, grid.pitch_y)
    frontier: list[tuple[Prefix, Point]] = [((), x)]
    for _ in range(depth):
        nxt: list[tuple[Prefix, Point]] = []
        pts = np.array([p for _, p in frontier], dtype=np.float64)
        ix, iy, valid = grid.pixel_indices(pts, slack_px=1.0)
        for i, (prefix, pt) in enumerate(frontier):
            if not valid[i]:
                continue
            for n in range(ifs.n_maps):
                if not dilated[n, iy[i], ix[i]]:
                    continue
                a, b, c, d, e, l = inv[n]
                y = (a * pt[0] + b * pt[1] + c, d * pt[0] + e * pt[1] + l)
                slack = 2.0 / s_max[n]
                fx = (y[0] - grid.viewport.xmin) / grid.pitch_x
                fy = (y[1] - grid.viewport.ymin) / grid.pitch_y
                if not (
                    -slack <= fx <= grid.width + slack
                    and -slack <= fy <= grid.height + slack
                ):
                    continue
                jx = min(max(int(np.floor(fx)), 0), grid.width - 1)
                jy = min(max(int(np.floor(fy)), 0), grid.height - 1)
                if edt[jy, jx] > 2.0 * pitch / s_max[n]:
                    continue
                if edt[jy, jx] > 0.0:
                    cy, cx = near_iy[jy, jx], near_ix[jy, jx]
                    y = (
                        grid.viewport.xmin + (cx + 0.5) * grid.pitch_x,
                        grid.viewport.ymin + (cy + 0.5) * grid.pitch_y,
                    )
                nxt.append((prefix + (n + 1,), y))
        if not nxt:
            raise OffAttractorError(f"no admissible preimage branch at {x}")
        if len(nxt) > max_count:
            raise BranchLimitError(
                f"backwards orbit of {x} exceeded {max_count} branches"
            )
        frontier = nxt
    return {prefix for prefix, _ in frontier}


def shift_complexity(
    part: DomainPartition, sample_count: int, depth: int, seed: int
) -> float:
    """ln(distinct depth-n itinerary prefixes over random samples)/n.

    A lower estimate of the shift complexity of the tops dynamical
    system; a sampling heuristic, not an exact quantity.
    """
    if sample_count < 1 or depth < 1:
        raise ValueError("sample_count and depth must be >= 1")
    pts = chaos_points(part.ifs, sample_count, seed)
    syms, _, ok, _, _ = tops_orbits_batch(part, pts, depth)
    distinct = {tuple(row) for row in syms[ok]}
    if not distinct:
        raise OffAttractorError("no sample produced a full itinerary")
    return float(np.log(len(distinct)) / depth)

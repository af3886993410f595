"""Fractal transformations between attractors.

The transformation sends x on the attractor of F to the point of the
attractor of G addressed by the tops address of x.  Two renderers are
provided: the stochastic tops-plus-color-stealing algorithm (coupled
random orbits sharing symbols) and a deterministic per-pixel variant
used as the reference.  Diagnostics probe continuity, address-structure
refinement, and area preservation at finite depth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels
from .codespace import EQUAL, GREATER, MAX_DEPTH, Prefix, tops_compare
from .ifs import IFS, Point, Viewport, ifs_contraction
from .raster import (
    AttractorMask,
    PixelGrid,
    RasterPicture,
    chaos_points,
    dilate,
    image_masks,
    phi_eval,
    phi_eval_batch,
    render_adaptive,
)
from .rng import prng_stream, select_symbols
from .tops import (
    DomainPartition,
    OffAttractorError,
    _enum_context,
    build_partition,
    enumerate_addresses,
    tops_orbits_batch,
)

DEFAULT_BURN_IN = 100

#: Base pixel tolerance of the refinement verdict.
REFINEMENT_TOL_PX = 4.0


@dataclass
class TopsRecord:
    """Per-pixel state of the color-stealing algorithm: the greatest
    reverse address seen so far and the color stolen with it."""

    best: Prefix
    color: tuple[int, int, int]
    g_point: Point


@dataclass
class TransformReport:
    pixels_written: int
    update_conflicts: int
    coverage_fraction: float


@dataclass(frozen=True)
class ConsistentWithRefinement:
    classes_checked: int

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Violation:
    point: Point
    address_a: Prefix
    address_b: Prefix
    image_a: Point
    image_b: Point
    distance: float

    def __bool__(self) -> bool:
        return False


def color_steal(
    F: IFS,
    G: IFS,
    pictureG: RasterPicture,
    iterations: int,
    seed: int,
    gridF: PixelGrid,
    depth: int = MAX_DEPTH,
    burn_in: int = DEFAULT_BURN_IN,
    attractor: AttractorMask | None = None,
) -> tuple[RasterPicture, TransformReport]:
    """Tops plus color stealing: coupled random orbits on F and G driven
    by the same symbols; each visited F pixel keeps the color sampled at
    the G orbit point of the step with the greatest reverse address.

    Deterministic given (seed, iterations).  coverage_fraction compares
    the written pixels against F's attractor mask; a value below 0.99
    signals a sampling failure (the picture is still returned).
    """
    if F.n_maps != G.n_maps:
        raise ValueError("F and G must have the same number of maps")
    if iterations < burn_in:
        raise ValueError("iterations must be at least burn_in")
    out = RasterPicture.blank(gridF)
    best = np.full((gridF.height, gridF.width, depth), 255, dtype=np.uint8)
    fvp = F.viewport
    gvp = G.viewport
    fcx, fcy = fvp.center()
    gcx, gcy = gvp.center()
    ggrid = pictureG.grid
    writes, conflicts = _kernels.color_steal(
        F.coefficient_array(),
        G.coefficient_array(),
        F.cumulative_probabilities(),
        np.uint64(seed),
        iterations,
        burn_in,
        depth,
        fcx, fcy, fvp.xmin, fvp.ymin,
        gridF.pitch_x, gridF.pitch_y, gridF.width, gridF.height,
        gcx, gcy, ggrid.viewport.xmin, ggrid.viewport.ymin,
        ggrid.pitch_x, ggrid.pitch_y, ggrid.width, ggrid.height,
        pictureG.pixels, pictureG.coverage,
        best, out.pixels, out.coverage,
    )
    if attractor is None:
        attractor = render_adaptive(F, gridF)
    total = attractor.count()
    covered = int((out.coverage & attractor.bits).sum())
    return out, TransformReport(
        pixels_written=int(writes),
        update_conflicts=int(conflicts),
        coverage_fraction=covered / total if total else 0.0,
    )


def color_steal_records(
    F: IFS,
    G: IFS,
    pictureG: RasterPicture,
    iterations: int,
    seed: int,
    gridF: PixelGrid,
    depth: int = MAX_DEPTH,
    burn_in: int = DEFAULT_BURN_IN,
) -> list[tuple[tuple[int, int], Prefix, tuple[int, int, int]]]:
    """The (pixel, reverse address, color) sample log of a color_steal
    run, as plain data.  Reference implementation for order-independence
    checks; use color_steal for real rendering."""
    syms = select_symbols(prng_stream(seed, iterations), F.probabilities)
    xf = F.viewport.center()
    xg = G.viewport.center()
    ggrid = pictureG.grid
    log = []
    for k in range(1, iterations + 1):
        n = int(syms[k - 1])
        mf = F.maps[n - 1]
        mg = G.maps[n - 1]
        xf = (mf.a * xf[0] + mf.b * xf[1] + mf.c, mf.d * xf[0] + mf.e * xf[1] + mf.l)
        xg = (mg.a * xg[0] + mg.b * xg[1] + mg.c, mg.d * xg[0] + mg.e * xg[1] + mg.l)
        if k <= burn_in:
            continue
        fpix = gridF.pixel_of(xf)
        gpix = ggrid.pixel_of(xg)
        if fpix is None or gpix is None or not pictureG.coverage[gpix[1], gpix[0]]:
            continue
        reverse = tuple(int(s) for s in syms[k - 1 :: -1][:depth])
        color = tuple(int(v) for v in pictureG.pixels[gpix[1], gpix[0]])
        log.append((fpix, reverse, color))
    return log


def apply_records(
    log, gridF: PixelGrid, attractor: AttractorMask | None = None
) -> tuple[RasterPicture, TransformReport, dict]:
    """Fold a color_steal sample log into a picture; the result depends
    only on the multiset of samples, not their order.  Samples whose
    truncated reverse addresses tie are broken by the smaller color, so
    the fold stays order-independent.  coverage_fraction is relative to
    the attractor mask when one is given, else 0."""
    records: dict[tuple[int, int], TopsRecord] = {}
    conflicts = 0
    for pix, reverse, color in log:
        rec = records.get(pix)
        if rec is not None:
            cmp = tops_compare(reverse, rec.best)
            if cmp != GREATER and not (cmp == EQUAL and color < rec.color):
                continue
            conflicts += 1
        records[pix] = TopsRecord(best=reverse, color=color, g_point=(0.0, 0.0))
    out = RasterPicture.blank(gridF)
    for (ix, iy), rec in records.items():
        out.pixels[iy, ix] = rec.color
        out.coverage[iy, ix] = True
    fraction = 0.0
    if attractor is not None and attractor.count() > 0:
        fraction = float(np.sum(out.coverage & attractor.bits) / attractor.count())
    report = TransformReport(
        pixels_written=len(records),
        update_conflicts=conflicts,
        coverage_fraction=fraction,
    )
    return out, report, records


def transform_points(
    part: DomainPartition, G: IFS, pts: np.ndarray, depth: int
):
    """Vectorized fractal transformation of (S, 2) points on A_F.

    Returns (images (S, 2), ok, boundary_flags, drift); rows with ok
    False fell off the attractor mask during the tops orbit.  drift is
    the accumulated contraction-weighted snap distance of the orbit, an
    upper bound on the output uncertainty from input quantization.
    """
    syms, flags, ok, _, drift = tops_orbits_batch(part, pts, depth)
    safe = np.where(syms == 0, 1, syms)
    images = phi_eval_batch(G, safe)
    return images, ok, flags, drift


def transform_point(
    part: DomainPartition, G: IFS, x: Point, depth: int
) -> tuple[Point, float]:
    """Fractal transformation of one point, with the truncation error
    radius l_G**depth * diam(G viewport)."""
    pts = np.array([[x[0], x[1]]], dtype=np.float64)
    images, ok, _, _ = transform_points(part, G, pts, depth)
    if not ok[0]:
        raise OffAttractorError(f"point {x} is off the attractor mask")
    radius = ifs_contraction(G) ** depth * G.viewport.diameter()
    return (float(images[0, 0]), float(images[0, 1])), radius


def transform_picture_deterministic(
    part: DomainPartition,
    G: IFS,
    pictureG: RasterPicture,
    depth: int = MAX_DEPTH,
) -> tuple[RasterPicture, TransformReport]:
    """Per-pixel reference renderer: transform every attractor pixel
    center of F and sample the G picture there."""
    grid = part.grid
    out = RasterPicture.blank(grid)
    centers = grid.centers(part.attractor.bits)
    if len(centers) == 0:
        return out, TransformReport(0, 0, 0.0)
    images, ok, _, _ = transform_points(part, G, centers, depth)
    gix, giy, gvalid = pictureG.grid.pixel_indices(images)
    good = ok & gvalid
    good[good] &= pictureG.coverage[giy[good], gix[good]]
    iy, ix = np.nonzero(part.attractor.bits)
    out.pixels[iy[good], ix[good]] = pictureG.pixels[giy[good], gix[good]]
    out.coverage[iy[good], ix[good]] = True
    total = part.attractor.count()
    return out, TransformReport(
        pixels_written=int(good.sum()),
        update_conflicts=0,
        coverage_fraction=float(good.sum() / total) if total else 0.0,
    )


def continuity_probe(
    part: DomainPartition,
    G: IFS,
    scales,
    samples: int,
    depth: int,
    seed: int,
) -> list[tuple[float, float]]:
    """For each scale eps, the max |T(x) - T(x')| over sampled attractor
    pairs with |x - x'| <= eps.  A diagnostic, not a proof: small values
    at shrinking eps are consistent with continuity, a floor that does
    not shrink exhibits a discontinuity witness.

    Samples are random attractor points; sampling the partition boundary
    band directly would saturate the small scales with worst-case pairs
    at junction points, where even a continuous transformation can have
    an arbitrarily flat modulus of continuity."""
    pts = chaos_points(part.ifs, samples, seed)
    images, ok, _, _ = transform_points(part, G, pts, depth)
    pts = pts[ok]
    images = images[ok]
    scales = sorted(float(s) for s in scales)
    tree = cKDTree(pts)
    pairs = tree.query_pairs(r=max(scales), output_type="ndarray")
    if len(pairs) == 0:
        return [(s, 0.0) for s in scales]
    gaps = np.hypot(*(pts[pairs[:, 0]] - pts[pairs[:, 1]]).T)
    disps = np.hypot(*(images[pairs[:, 0]] - images[pairs[:, 1]]).T)
    out = []
    for s in scales:
        sel = gaps <= s
        out.append((s, float(disps[sel].max()) if sel.any() else 0.0))
    return out


def refinement_check(
    F: IFS,
    G: IFS,
    depth: int,
    samples: int,
    grid: PixelGrid,
    seed: int,
    probe_words: int = 16,
):
    """Finite-depth necessary-condition test of address-structure
    refinement: every depth-d F-address class probed must map under the
    G address function to points within 4 pixels + l_G**d * diam(G).

    Probed classes are (a) random attractor samples and (b) overlap
    classes pushed to the depth-commensurate scale: centers of pixels
    shared by two image masks, taken through F-words of length d - 2, so
    the class splits at the deepest step the evaluation depth resolves.
    Classes splitting at shallower steps are exempt, as with all
    boundary-band exemptions: their G-image spread is dominated by
    geometry coarser than depth d resolves.
    """
    if F.n_maps != G.n_maps:
        raise ValueError("F and G must have the same number of maps")
    attractor = render_adaptive(F, grid)
    images = image_masks(F, attractor)
    dilated = [dilate(b, 1) for b in images]
    overlap = np.sum(dilated, axis=0) >= 2
    tol = REFINEMENT_TOL_PX * max(grid.pitch_x, grid.pitch_y)
    tol += ifs_contraction(G) ** depth * G.viewport.diameter()

    probe_pts: list[Point] = [
        (float(p[0]), float(p[1])) for p in chaos_points(F, samples, seed)
    ]
    min_split = {i: 0 for i in range(len(probe_pts))}
    # overlap-class probes at the resolvable scale
    centers = grid.centers(overlap)
    if len(centers) > 8:
        centers = centers[:: len(centers) // 8 + 1]
    wlen = max(0, depth - 2)
    words = [(1,) * wlen]
    rng = np.random.default_rng(seed)
    for _ in range(probe_words):
        words.append(tuple(int(s) for s in rng.integers(1, F.n_maps + 1, size=wlen)))
    for cx, cy in centers:
        for w in words:
            x, y = cx, cy
            for s in reversed(w):
                m = F.maps[s - 1]
                x, y = m.a * x + m.b * y + m.c, m.d * x + m.e * y + m.l
            min_split[len(probe_pts)] = wlen
            probe_pts.append((x, y))

    ctx = _enum_context(F, images, grid)
    checked = 0
    for i, pt in enumerate(probe_pts):
        try:
            addrs = enumerate_addresses(F, images, grid, pt, depth, context=ctx)
        except OffAttractorError:
            continue
        if len(addrs) < 2:
            checked += 1
            continue
        addrs = sorted(addrs)
        split = min(
            next(j for j in range(depth) if a[j] != addrs[0][j])
            for a in addrs[1:]
        )
        if split < min_split[i]:
            continue
        pts_g = [phi_eval(G, a)[0] for a in addrs]
        checked += 1
        for j in range(len(addrs)):
            for k in range(j + 1, len(addrs)):
                d = float(np.hypot(pts_g[j][0] - pts_g[k][0], pts_g[j][1] - pts_g[k][1]))
                if d > tol:
                    return Violation(
                        point=(float(pt[0]), float(pt[1])),
                        address_a=addrs[j],
                        address_b=addrs[k],
                        image_a=pts_g[j],
                        image_b=pts_g[k],
                        distance=d,
                    )
    return ConsistentWithRefinement(classes_checked=checked)


def area_probe(
    part: DomainPartition,
    G: IFS,
    region: Viewport,
    samples: int,
    seed: int,
    depth: int = MAX_DEPTH,
    grid_size: int = 512,
):
    """Occupied-pixel area estimates of region(intersect)A_F and of its
    image under the fractal transformation, at a stated grid.

    Both sides use the same estimator (pixels occupied by the sample
    cloud times pixel area) so the rasterization bias largely cancels in
    the ratio.  Returns ((areaF, seF), (areaG, seG)).
    """
    rng = np.random.default_rng(seed)
    pts = np.column_stack(
        [
            rng.uniform(region.xmin, region.xmax, samples),
            rng.uniform(region.ymin, region.ymax, samples),
        ]
    )
    ix, iy, valid = part.grid.pixel_indices(pts)
    on = valid.copy()
    on[valid] = part.attractor.bits[iy[valid], ix[valid]]
    pts = pts[on]
    if len(pts) == 0:
        raise OffAttractorError("region does not intersect the attractor mask")
    images, ok, _, _ = transform_points(part, G, pts, depth)
    pts = pts[ok]
    images = images[ok]
    gridF = PixelGrid(grid_size, grid_size, part.ifs.viewport)
    gridG = PixelGrid(grid_size, grid_size, G.viewport)
    areaF, seF = _occupied_area(pts, gridF)
    areaG, seG = _occupied_area(images, gridG)
    return (areaF, seF), (areaG, seG)


def _occupied_area(pts: np.ndarray, grid: PixelGrid) -> tuple[float, float]:
    """Occupied-pixel area with a heuristic standard error.

    When the cloud saturates its pixels the residual fluctuation lives on
    the boundary band, so the error is scored as one pixel of area per
    boundary pixel (estimated as sqrt of the occupied count).
    """
    pix_area = grid.pitch_x * grid.pitch_y
    ix, iy, valid = grid.pixel_indices(pts)
    occupied = len(np.unique(iy[valid].astype(np.int64) * grid.width + ix[valid]))
    return occupied * pix_area, pix_area * float(np.sqrt(occupied))


def make_partition(F: IFS, grid: PixelGrid) -> DomainPartition:
    """Convenience wrapper: adaptive-render partition at this grid."""
    return build_partition(F, grid)

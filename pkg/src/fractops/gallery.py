"""Built-in IFS constructors and the affine correspondence solver.

Coefficient tables are transcribed literally.  The triangle family is
built from point correspondences rather than from a closed-form
coefficient table; see table1_reference and table1_comparison for the
literal table and a diff report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ifs import (
    IFS,
    AffineMap2,
    IFSError,
    Point,
    Viewport,
    UNIT_SQUARE,
    apply_map,
    validate_hyperbolic,
)
from .raster import AttractorMask, RasterPicture

DRAGON_VIEWPORT = Viewport(-3.5, -3.5, 3.5, 3.5)

#: Canonical triangle vertices used by every built-in triangle family.
TRI_A: Point = (0.0, 0.0)
TRI_B: Point = (1.0, 0.0)
TRI_C: Point = (0.5, 1.0)


class CollinearPointsError(IFSError):
    """Source points of a correspondence are collinear."""


def affine_from_correspondence(
    sources: tuple[Point, Point, Point],
    targets: tuple[Point, Point, Point],
) -> AffineMap2:
    """The unique affine map sending each source point to its target.

    One 3x3 linear solve per output coordinate; solved maps are checked
    to reproduce the targets within 1e-10.
    """
    mat = np.array([[p[0], p[1], 1.0] for p in sources])
    if abs(np.linalg.det(mat)) < 1e-12:
        raise CollinearPointsError(f"source points {sources} are collinear")
    tx = np.linalg.solve(mat, np.array([q[0] for q in targets]))
    ty = np.linalg.solve(mat, np.array([q[1] for q in targets]))
    m = AffineMap2(tx[0], tx[1], tx[2], ty[0], ty[1], ty[2])
    for p, q in zip(sources, targets):
        r = apply_map(m, p)
        if math.hypot(r[0] - q[0], r[1] - q[1]) > 1e-10:
            raise IFSError("correspondence solve residual above 1e-10")
    return m


@dataclass(frozen=True)
class TriangleSpec:
    """Triangle ABC with one subdivision point per side.

    a = C + beta*(B - C) lies on BC, b = A + gamma*(C - A) on CA, and
    c = B + alpha*(A - B) on AB, so the four maps built from the
    correspondences h1(ABC) = aBc, h2(ABC) = abC, h3(ABC) = Abc and
    h4(ABC) = abc tile the triangle exactly for any parameters: h1, h2,
    h3 are the corner pieces at B, C, A and h4 is the central piece.
    """

    alpha: float
    beta: float
    gamma: float
    A: Point = TRI_A
    B: Point = TRI_B
    C: Point = TRI_C

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise IFSError(f"{name} = {v!r} is not strictly inside (0, 1)")
        if abs(self._signed_area()) < 1e-12:
            raise IFSError("triangle vertices are (nearly) collinear")

    def _signed_area(self) -> float:
        ax, ay = self.A
        bx, by = self.B
        cx, cy = self.C
        return 0.5 * ((bx - ax) * (cy - ay) - (cx - ax) * (by - ay))

    def subdivision_points(self) -> tuple[Point, Point, Point]:
        """(a, b, c) as described in the class docstring."""
        a = _lerp(self.C, self.B, self.beta)
        b = _lerp(self.A, self.C, self.gamma)
        c = _lerp(self.B, self.A, self.alpha)
        return a, b, c


def _lerp(p: Point, q: Point, t: float) -> Point:
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def triangle_family(spec: TriangleSpec, sierpinski: bool = False) -> IFS:
    """The four-map IFS of a TriangleSpec, or the three-map Sierpinski
    variant that drops the central piece."""
    a, b, c = spec.subdivision_points()
    abc = (spec.A, spec.B, spec.C)
    maps = [
        affine_from_correspondence(abc, (a, spec.B, c)),
        affine_from_correspondence(abc, (a, b, spec.C)),
        affine_from_correspondence(abc, (spec.A, b, c)),
        affine_from_correspondence(abc, (a, b, c)),
    ]
    if sierpinski:
        maps = maps[:3]
    xs = [spec.A[0], spec.B[0], spec.C[0]]
    ys = [spec.A[1], spec.B[1], spec.C[1]]
    viewport = Viewport(min(xs), min(ys), max(xs), max(ys))
    return validate_hyperbolic(maps, viewport=viewport)


_FERN_ROWS = (
    (0.85, -0.05, 0.125, 0.05, 0.85, -0.039),
    (0.06, 0.02, 0.45, 0.0, 0.165, 0.835),
    (0.17, 0.22, 0.195, -0.22, 0.17, 0.776),
    (-0.17, -0.22, 0.805, -0.22, 0.17, 0.776),
)

_SQUARE_CTS_ROWS = (
    (0.8, 0.0, 0.0, 0.0, 0.8, 0.0),
    (0.2, 0.0, 0.8, 0.0, 0.8, 0.2),
    (-0.2, 0.0, 1.0, 0.0, 0.8, 0.0),
    (0.8, 0.0, 0.0, 0.0, -0.2, 1.0),
)

_SQUARE_DISC_ROWS = (
    (-0.8, 0.0, 0.8, 0.0, -0.8, 0.8),
    (-0.2, 0.0, 1.0, 0.0, -0.2, 1.0),
    (0.8, 0.0, 0.0, 0.0, 0.2, 0.8),
    (0.2, 0.0, 0.8, 0.0, 0.8, 0.0),
)


def _from_rows(rows) -> IFS:
    return validate_hyperbolic([AffineMap2(*r) for r in rows], viewport=UNIT_SQUARE)


def fern_ifs() -> IFS:
    """Four-map fern with a common junction point shared by all images."""
    return _from_rows(_FERN_ROWS)


def square_cts_ifs() -> IFS:
    """Four-map filled-square IFS whose address structure refines the
    fern's (the fern-to-square transformation is continuous)."""
    return _from_rows(_SQUARE_CTS_ROWS)


def square_disc_ifs() -> IFS:
    """Variant filled-square IFS with flipped maps; the fern-to-square
    transformation through it is not continuous."""
    return _from_rows(_SQUARE_DISC_ROWS)


def dragon_ifs(s_re: float, s_im: float) -> IFS:
    """Two-map IFS z -> s*z - 1, z -> s*z + 1 embedded as real affine
    maps; requires |s| < 1."""
    if math.hypot(s_re, s_im) >= 1.0:
        raise IFSError(f"|s| = {math.hypot(s_re, s_im)!r} must be < 1")
    maps = [
        AffineMap2(s_re, -s_im, -1.0, s_im, s_re, 0.0),
        AffineMap2(s_re, -s_im, 1.0, s_im, s_re, 0.0),
    ]
    return validate_hyperbolic(maps, viewport=DRAGON_VIEWPORT)


def table1_reference(alpha: float, beta: float, gamma: float) -> list[AffineMap2]:
    """Literal evaluation of a commonly quoted closed-form coefficient
    table for the triangle family, kept for reference and diagnostics
    only (it disagrees with the correspondence construction; see
    table1_comparison)."""
    return [
        AffineMap2(
            -1.0 + beta,
            -0.5 + 0.5 * beta + 0.5 * alpha,
            1.0 - beta,
            0.0,
            alpha,
            0.0,
        ),
        AffineMap2(
            beta + 0.5 * gamma - 0.5,
            0.5 * beta - 0.25 * gamma + 0.25,
            1.0 - beta,
            1.0 - gamma,
            0.5 * gamma - 0.5,
            0.0,
        ),
        AffineMap2(
            0.5 * gamma,
            -0.5 + 0.5 * alpha - 0.25 * gamma,
            0.5,
            -gamma,
            -1.0 + alpha + 0.5 * gamma,
            1.0,
        ),
        AffineMap2(
            beta + 0.5 * gamma - 0.5,
            -0.75 + 0.5 * beta + 0.5 * alpha - 0.25 * gamma,
            1.0 - beta,
            1.0 - gamma,
            alpha - 0.5 + 0.5 * gamma,
            0.0,
        ),
    ]


def table1_comparison(alpha: float, beta: float, gamma: float) -> str:
    """Max coefficient difference per map between the reference table and
    the correspondence construction, as a printable report."""
    family = triangle_family(TriangleSpec(alpha, beta, gamma))
    ref = table1_reference(alpha, beta, gamma)
    lines = [f"triangle family alpha={alpha} beta={beta} gamma={gamma}"]
    for n, (m, r) in enumerate(zip(family.maps, ref), start=1):
        diff = max(
            abs(x - y) for x, y in zip(m.coefficients(), r.coefficients())
        )
        lines.append(f"  map {n}: max coefficient diff vs reference table = {diff:.6g}")
    return "\n".join(lines)


def mask_picture(pic: RasterPicture, mask: AttractorMask) -> RasterPicture:
    """Restrict a picture's coverage to the set bits of a mask."""
    if pic.grid != mask.grid:
        raise ValueError("picture and mask grids differ")
    return RasterPicture(
        grid=pic.grid,
        pixels=pic.pixels.copy(),
        coverage=pic.coverage & mask.bits,
    )


def make_ifs(name: str) -> IFS:
    """Resolve a gallery name: fern, square-cts, square-disc,
    dragon:<re>,<im>, tri:<a>,<b>,<g>, sierpinski:<a>,<b>,<g>."""
    base, _, args = name.partition(":")
    if base == "fern":
        return fern_ifs()
    if base == "square-cts":
        return square_cts_ifs()
    if base == "square-disc":
        return square_disc_ifs()
    if base == "dragon":
        re, im = _floats(args, 2, name)
        return dragon_ifs(re, im)
    if base in ("tri", "sierpinski"):
        a, b, g = _floats(args, 3, name)
        return triangle_family(TriangleSpec(a, b, g), sierpinski=base == "sierpinski")
    raise ValueError(f"unknown gallery name {name!r}")


GALLERY_HELP = (
    ("fern", "four-map fern, published coefficient table"),
    ("square-cts", "filled square, address structure refined by the fern's"),
    ("square-disc", "filled square, flipped maps (discontinuous case)"),
    ("dragon:<re>,<im>", "two maps s*z-1, s*z+1 with s = re+im*i, |s| < 1"),
    ("tri:<a>,<b>,<g>", "four-map triangle family, parameters in (0,1)"),
    ("sierpinski:<a>,<b>,<g>", "three corner maps of the triangle family"),
)


def _floats(args: str, count: int, name: str) -> list[float]:
    parts = args.split(",") if args else []
    if len(parts) != count:
        raise ValueError(f"{name!r} needs {count} comma-separated parameters")
    return [float(p) for p in parts]

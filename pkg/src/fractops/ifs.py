"""Planar affine contractions and hyperbolic IFS containers.

An IFS here is an ordered list of invertible, strictly contractive affine
maps of the plane, together with selection probabilities and a viewport
rectangle used by the rasterizing code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Point = tuple[float, float]

#: Maps whose contraction factor exceeds 1 - CONTRACTION_TOL are rejected.
CONTRACTION_TOL = 1e-12
#: Maps with |det| below this are treated as singular.
SINGULAR_TOL = 1e-14


class IFSError(ValueError):
    """Invalid IFS construction or use."""


class SingularMapError(IFSError):
    """Affine map is not invertible."""


class NotContractiveError(IFSError):
    """Affine map is not a strict contraction."""


@dataclass(frozen=True)
class AffineMap2:
    """The map (x, y) -> (a*x + b*y + c, d*x + e*y + l)."""

    a: float
    b: float
    c: float
    d: float
    e: float
    l: float

    def coefficients(self) -> tuple[float, float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e, self.l)

    def det(self) -> float:
        return self.a * self.e - self.b * self.d

    def __call__(self, p: Point) -> Point:
        return apply_map(self, p)


def apply_map(m: AffineMap2, p: Point) -> Point:
    """Apply the affine map to a point, evaluated left to right."""
    return (m.a * p[0] + m.b * p[1] + m.c, m.d * p[0] + m.e * p[1] + m.l)


def invert_map(m: AffineMap2) -> AffineMap2:
    """Inverse affine map; raises SingularMapError when |det| < 1e-14."""
    det = m.det()
    if abs(det) < SINGULAR_TOL:
        raise SingularMapError(f"map determinant {det!r} too small to invert")
    ia = m.e / det
    ib = -m.b / det
    id_ = -m.d / det
    ie = m.a / det
    return AffineMap2(ia, ib, -(ia * m.c + ib * m.l), id_, ie, -(id_ * m.c + ie * m.l))


def compose(m1: AffineMap2, m2: AffineMap2) -> AffineMap2:
    """Composition m1 after m2 (m1 o m2)."""
    return AffineMap2(
        m1.a * m2.a + m1.b * m2.d,
        m1.a * m2.b + m1.b * m2.e,
        m1.a * m2.c + m1.b * m2.l + m1.c,
        m1.d * m2.a + m1.e * m2.d,
        m1.d * m2.b + m1.e * m2.e,
        m1.d * m2.c + m1.e * m2.l + m1.l,
    )


def contraction_factor(m: AffineMap2) -> float:
    """Largest singular value of the linear part [[a, b], [d, e]].

    Closed form from the eigenvalues of the Gram matrix; independent of
    the translation part.
    """
    q1 = m.a * m.a + m.b * m.b + m.d * m.d + m.e * m.e
    q2 = math.hypot(
        m.a * m.a + m.b * m.b - m.d * m.d - m.e * m.e,
        2.0 * (m.a * m.d + m.b * m.e),
    )
    return math.sqrt(0.5 * (q1 + q2))


def fixed_point(m: AffineMap2) -> Point:
    """Fixed point of a contractive affine map, by solving (I - L)x = t."""
    det = (1.0 - m.a) * (1.0 - m.e) - m.b * m.d
    if abs(det) < SINGULAR_TOL:
        raise IFSError("map has no isolated fixed point (I - L singular)")
    x = (m.c * (1.0 - m.e) + m.b * m.l) / det
    y = (m.l * (1.0 - m.a) + m.d * m.c) / det
    return (x, y)


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned rectangle in viewport units."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise IFSError("viewport must have positive width and height")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    def center(self) -> Point:
        return (0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    def contains(self, p: Point) -> bool:
        return self.xmin <= p[0] <= self.xmax and self.ymin <= p[1] <= self.ymax


UNIT_SQUARE = Viewport(0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class IFS:
    """A validated hyperbolic IFS. Construct via validate_hyperbolic()."""

    maps: tuple[AffineMap2, ...]
    probabilities: tuple[float, ...]
    viewport: Viewport

    @property
    def n_maps(self) -> int:
        return len(self.maps)

    def coefficient_array(self) -> np.ndarray:
        """(N, 6) float64 array of rows (a, b, c, d, e, l)."""
        return np.array([m.coefficients() for m in self.maps], dtype=np.float64)

    def inverse_coefficient_array(self) -> np.ndarray:
        return np.array(
            [invert_map(m).coefficients() for m in self.maps], dtype=np.float64
        )

    def cumulative_probabilities(self) -> np.ndarray:
        return np.cumsum(np.asarray(self.probabilities, dtype=np.float64))

    def apply_batch(self, n: int, pts: np.ndarray) -> np.ndarray:
        """Apply map n (1-based) to an (S, 2) array of points."""
        m = self.maps[n - 1]
        out = np.empty_like(pts)
        out[:, 0] = m.a * pts[:, 0] + m.b * pts[:, 1] + m.c
        out[:, 1] = m.d * pts[:, 0] + m.e * pts[:, 1] + m.l
        return out


def ifs_contraction(ifs: IFS) -> float:
    """Contractivity factor of the system: max over member factors."""
    return max(contraction_factor(m) for m in ifs.maps)


def default_probabilities(maps: list[AffineMap2] | tuple[AffineMap2, ...]) -> tuple[float, ...]:
    """Probabilities proportional to |det| (area of the image), normalized.

    Falls back to uniform weights if every determinant vanishes.
    """
    dets = [abs(m.det()) for m in maps]
    total = sum(dets)
    if total <= 0.0:
        return tuple(1.0 / len(maps) for _ in maps)
    return tuple(d / total for d in dets)


def validate_hyperbolic(
    maps,
    probabilities=None,
    viewport: Viewport = UNIT_SQUARE,
) -> IFS:
    """Validate maps and build an IFS.

    Every map must be invertible and strictly contractive.  When
    probabilities are omitted they default to |det|-proportional weights.
    """
    maps = tuple(maps)
    if not maps:
        raise IFSError("an IFS needs at least one map")
    for i, m in enumerate(maps):
        if abs(m.det()) < SINGULAR_TOL:
            raise SingularMapError(f"map {i + 1} is singular (det={m.det()!r})")
        s = contraction_factor(m)
        if s >= 1.0 - CONTRACTION_TOL:
            raise NotContractiveError(
                f"map {i + 1} is not strictly contractive (factor={s!r})"
            )
    if probabilities is None:
        probabilities = default_probabilities(maps)
    else:
        probabilities = tuple(float(p) for p in probabilities)
        if len(probabilities) != len(maps):
            raise IFSError("probability vector length does not match map count")
        if any(p <= 0.0 for p in probabilities):
            raise IFSError("probabilities must all be positive")
        if abs(sum(probabilities) - 1.0) > 1e-12:
            raise IFSError(f"probabilities sum to {sum(probabilities)!r}, not 1")
    return IFS(maps=maps, probabilities=probabilities, viewport=viewport)

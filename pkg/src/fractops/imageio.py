"""Binary PPM/PGM picture I/O.

Pictures are stored as P6 with maxval 255 and an exact header layout so
goldens are byte-reproducible.  Coverage travels in a P5 sidecar file
(<path>.coverage.pgm) holding 0 or 255 per pixel; uncovered pixels are
written as black in the main file.
"""

from __future__ import annotations

import os

import numpy as np

from .raster import PixelGrid, RasterPicture
from .ifs import UNIT_SQUARE, Viewport


class PpmError(ValueError):
    """Malformed or unsupported PPM/PGM data."""


def coverage_path(path: str) -> str:
    return path + ".coverage.pgm"


def ppm_write(path: str, pic: RasterPicture) -> None:
    grid = pic.grid
    header = f"P6\n{grid.width} {grid.height}\n255\n".encode("ascii")
    pixels = np.where(pic.coverage[:, :, None], pic.pixels, 0).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(header + pixels.tobytes())
    cov_header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    cov = np.where(pic.coverage, 255, 0).astype(np.uint8)
    with open(coverage_path(path), "wb") as fh:
        fh.write(cov_header + cov.tobytes())


def _read_raw(path: str, magic: bytes) -> tuple[int, int, np.ndarray]:
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise PpmError(f"{path}: truncated header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte after maxval
    if tokens[0] != magic:
        raise PpmError(f"{path}: expected {magic.decode()} magic, got {tokens[0]!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise PpmError(f"{path}: non-numeric header field") from exc
    if width < 1 or height < 1:
        raise PpmError(f"{path}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise PpmError(f"{path}: maxval {maxval} unsupported (must be 255)")
    payload = data[pos:]
    channels = 3 if magic == b"P6" else 1
    need = width * height * channels
    if len(payload) < need:
        raise PpmError(f"{path}: truncated payload ({len(payload)} of {need} bytes)")
    arr = np.frombuffer(payload[:need], dtype=np.uint8)
    return width, height, arr.reshape(height, width, channels)


def ppm_read(path: str, viewport: Viewport = UNIT_SQUARE) -> RasterPicture:
    """Read a P6 picture; the coverage sidecar is honored when present,
    otherwise every pixel counts as covered."""
    width, height, arr = _read_raw(path, b"P6")
    grid = PixelGrid(width, height, viewport)
    cov_file = coverage_path(path)
    if os.path.exists(cov_file):
        cw, ch, cov = _read_raw(cov_file, b"P5")
        if (cw, ch) != (width, height):
            raise PpmError(f"{cov_file}: coverage size differs from picture")
        coverage = cov[:, :, 0] > 0
    else:
        coverage = np.ones((height, width), dtype=bool)
    return RasterPicture(grid=grid, pixels=arr.copy(), coverage=coverage)

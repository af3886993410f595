"""Shared fixtures: gallery IFSs and session-scoped partitions.

Partitions render the attractor once per session; tests treat them as
read-only.
"""

import numpy as np
import pytest

import fractops as ft


@pytest.fixture(scope="session")
def fern():
    return ft.fern_ifs()


@pytest.fixture(scope="session")
def square_cts():
    return ft.square_cts_ifs()


@pytest.fixture(scope="session")
def square_disc():
    return ft.square_disc_ifs()


@pytest.fixture(scope="session")
def dragon_td():
    # totally disconnected dragon
    return ft.dragon_ifs(0.44, 0.44)


@pytest.fixture(scope="session")
def fern_grid(fern):
    return ft.PixelGrid(256, 256, fern.viewport)


@pytest.fixture(scope="session")
def fern_partition(fern, fern_grid):
    return ft.build_partition(fern, fern_grid)


@pytest.fixture(scope="session")
def square_grid(square_cts):
    return ft.PixelGrid(256, 256, square_cts.viewport)


@pytest.fixture(scope="session")
def square_partition(square_cts, square_grid):
    return ft.build_partition(square_cts, square_grid)


@pytest.fixture(scope="session")
def quadrant_square_picture(square_grid):
    """Covered picture with four constant-color 128px quadrants."""
    pic = ft.RasterPicture.blank(square_grid)
    colors = ((200, 40, 40), (40, 200, 40), (40, 40, 200), (200, 200, 40))
    pic.pixels[:128, :128] = colors[0]
    pic.pixels[:128, 128:] = colors[1]
    pic.pixels[128:, :128] = colors[2]
    pic.pixels[128:, 128:] = colors[3]
    pic.coverage[:] = True
    return pic


@pytest.fixture(scope="session")
def gradient_square_picture(square_grid):
    """Covered picture on the unit square with a distinct color per pixel
    region (coordinate gradient)."""
    pic = ft.RasterPicture.blank(square_grid)
    gx, gy = np.meshgrid(np.arange(square_grid.width), np.arange(square_grid.height))
    pic.pixels[:, :, 0] = gx
    pic.pixels[:, :, 1] = gy
    pic.pixels[:, :, 2] = 128
    pic.coverage[:] = True
    return pic

"""Numba kernels for the random-iteration loops.

These loops are inherently sequential (each point depends on the previous
one), so they run as compiled scalar loops instead of numpy batches.  The
PRNG here must stay bit-identical to fractops.rng.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_SH30 = np.uint64(30)
_SH27 = np.uint64(27)
_SH31 = np.uint64(31)
_INV_TWO64 = 2.0**-64


@njit(cache=True, inline="always")
def _mix(state):
    z = state
    z = (z ^ (z >> _SH30)) * _MUL1
    z = (z ^ (z >> _SH27)) * _MUL2
    return z ^ (z >> _SH31)


@njit(cache=True, inline="always")
def _select(u, cum):
    n = len(cum) - 1
    for i in range(len(cum)):
        if cum[i] > u:
            n = i
            break
    return n


@njit(cache=True)
def chaos_mask(coefs, cum, seed, iters, burn_in, x0, y0,
               xmin, ymin, px, py, width, height, bits):
    state = seed
    x = x0
    y = y0
    for k in range(1, iters + 1):
        state = state + _GAMMA
        u = np.float64(_mix(state)) * _INV_TWO64
        n = _select(u, cum)
        x, y = (
            coefs[n, 0] * x + coefs[n, 1] * y + coefs[n, 2],
            coefs[n, 3] * x + coefs[n, 4] * y + coefs[n, 5],
        )
        if k <= burn_in:
            continue
        fx = (x - xmin) / px
        fy = (y - ymin) / py
        if fx < 0.0 or fx > width or fy < 0.0 or fy > height:
            continue
        ix = int(fx)
        iy = int(fy)
        if ix >= width:
            ix = width - 1
        if iy >= height:
            iy = height - 1
        bits[iy, ix] = True


@njit(cache=True)
def chaos_points(coefs, cum, seed, count, burn_in, x0, y0):
    out = np.empty((count, 2), dtype=np.float64)
    state = seed
    x = x0
    y = y0
    for k in range(burn_in + count):
        state = state + _GAMMA
        u = np.float64(_mix(state)) * _INV_TWO64
        n = _select(u, cum)
        x, y = (
            coefs[n, 0] * x + coefs[n, 1] * y + coefs[n, 2],
            coefs[n, 3] * x + coefs[n, 4] * y + coefs[n, 5],
        )
        if k >= burn_in:
            out[k - burn_in, 0] = x
            out[k - burn_in, 1] = y
    return out


@njit(cache=True, inline="always")
def _pixel(x, y, xmin, ymin, px, py, width, height):
    fx = (x - xmin) / px
    fy = (y - ymin) / py
    if fx < 0.0 or fx > width or fy < 0.0 or fy > height:
        return -1, -1
    ix = int(fx)
    iy = int(fy)
    if ix >= width:
        ix = width - 1
    if iy >= height:
        iy = height - 1
    return ix, iy


@njit(cache=True)
def color_steal(coefs_f, coefs_g, cum, seed, iters, burn_in, depth,
                fx0, fy0, fxmin, fymin, fpx, fpy, fw, fh,
                gx0, gy0, gxmin, gymin, gpx, gpy, gw, gh,
                gpixels, gcov, best, outpix, outcov):
    """Coupled random orbits under shared symbols.

    For each visited canvas pixel the greatest reverse address seen so far
    wins (255 entries in `best` are one-padding sentinels, so an untouched
    pixel loses to any real address: smaller symbol means greater address).
    Returns (writes, conflicts) where a conflict overwrites a pixel that
    had already been assigned.
    """
    ring = np.empty(depth, dtype=np.uint8)
    state = seed
    xf = fx0
    yf = fy0
    xg = gx0
    yg = gy0
    writes = 0
    conflicts = 0
    for k in range(1, iters + 1):
        state = state + _GAMMA
        u = np.float64(_mix(state)) * _INV_TWO64
        n = _select(u, cum)
        xf, yf = (
            coefs_f[n, 0] * xf + coefs_f[n, 1] * yf + coefs_f[n, 2],
            coefs_f[n, 3] * xf + coefs_f[n, 4] * yf + coefs_f[n, 5],
        )
        xg, yg = (
            coefs_g[n, 0] * xg + coefs_g[n, 1] * yg + coefs_g[n, 2],
            coefs_g[n, 3] * xg + coefs_g[n, 4] * yg + coefs_g[n, 5],
        )
        ring[(k - 1) % depth] = n + 1
        if k <= burn_in:
            continue
        fix, fiy = _pixel(xf, yf, fxmin, fymin, fpx, fpy, fw, fh)
        if fix < 0:
            continue
        gix, giy = _pixel(xg, yg, gxmin, gymin, gpx, gpy, gw, gh)
        if gix < 0 or not gcov[giy, gix]:
            continue
        greater = False
        tie = True
        for j in range(depth):
            if k - j >= 1:
                s = ring[(k - 1 - j) % depth]
            else:
                s = np.uint8(1)
            b = best[fiy, fix, j]
            if s == b:
                continue
            greater = s < b
            tie = False
            break
        if tie:
            # equal truncated addresses: smaller color wins, keeping the
            # result order-independent (a tie means the pixel was already
            # written, as untouched entries hold the 255 sentinel)
            for ch in range(3):
                cg = gpixels[giy, gix, ch]
                cb = outpix[fiy, fix, ch]
                if cg == cb:
                    continue
                greater = cg < cb
                break
        if not greater:
            continue
        for j in range(depth):
            if k - j >= 1:
                best[fiy, fix, j] = ring[(k - 1 - j) % depth]
            else:
                best[fiy, fix, j] = 1
        outpix[fiy, fix, 0] = gpixels[giy, gix, 0]
        outpix[fiy, fix, 1] = gpixels[giy, gix, 1]
        outpix[fiy, fix, 2] = gpixels[giy, gix, 2]
        if outcov[fiy, fix]:
            conflicts += 1
        outcov[fiy, fix] = True
        writes += 1
    return writes, conflicts

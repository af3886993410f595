"""SplitMix64 PRNG and probability-threshold symbol selection.

Chosen for trivial cross-language implementability and published
reference vectors; all random map choices in this package go through
this generator so runs are reproducible from a single 64-bit seed.
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

_TWO64 = 2.0**64


def prng_next(state: int) -> tuple[int, int]:
    """Advance SplitMix64 once; returns (new_state, output)."""
    state = (state + GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * _MUL1) & _MASK
    z = ((z ^ (z >> 27)) * _MUL2) & _MASK
    return state, (z ^ (z >> 31)) & _MASK


def prng_stream(seed: int, count: int) -> np.ndarray:
    """Vectorized SplitMix64: outputs for steps 1..count from seed.

    SplitMix64 is counter-based (state after i steps is seed + i*GAMMA),
    so the whole stream can be produced elementwise.
    """
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + idx * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
        return z ^ (z >> np.uint64(31))


def select_symbol(value: int, probabilities) -> int:
    """Least n (1-based) whose cumulative probability exceeds value/2**64."""
    u = value / _TWO64
    acc = 0.0
    n = 0
    for n, p in enumerate(probabilities, start=1):
        acc += p
        if acc > u:
            return n
    return n


def select_symbols(values: np.ndarray, probabilities) -> np.ndarray:
    """Vectorized select_symbol; returns uint8 symbols, 1-based."""
    u = values.astype(np.float64) / _TWO64
    cum = np.cumsum(np.asarray(probabilities, dtype=np.float64))
    # searchsorted with side='right' gives the least n with cum[n] > u
    syms = np.searchsorted(cum, u, side="right") + 1
    np.clip(syms, 1, len(cum), out=syms)
    return syms.astype(np.uint8)

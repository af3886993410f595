"""Finite address prefixes and the tops ordering on code space.

A prefix is a tuple of symbols from {1, ..., N}.  Semantically it stands
for the infinite address obtained by padding with an all-ones tail, so
the empty prefix denotes the all-ones address itself.  Under the tops
ordering, the address with the *smaller* symbol at the first point of
difference is the *greater* one; the all-ones address is the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass

Prefix = tuple[int, ...]

LESS = -1
EQUAL = 0
GREATER = 1

#: Default maximum prefix depth; 2**-48 is far below pixel resolution.
MAX_DEPTH = 48

#: Symbols are stored as small ints; alphabet size is bounded at 255.
MAX_SYMBOL = 255


def tops_compare(p: Prefix, q: Prefix) -> int:
    """Compare two one-padded addresses under the tops ordering.

    Returns GREATER when p is the larger address, i.e. when p carries the
    smaller symbol at the first index where the padded addresses differ.
    """
    n = max(len(p), len(q))
    for k in range(n):
        a = p[k] if k < len(p) else 1
        b = q[k] if k < len(q) else 1
        if a != b:
            return GREATER if a < b else LESS
    return EQUAL


def code_metric(p: Prefix, q: Prefix) -> float:
    """2**-k for the least index k (1-based) where the padded addresses
    differ; 0 when they agree everywhere."""
    n = max(len(p), len(q))
    for k in range(n):
        a = p[k] if k < len(p) else 1
        b = q[k] if k < len(q) else 1
        if a != b:
            return 2.0 ** -(k + 1)
    return 0.0


def shift(p: Prefix) -> Prefix:
    """Drop the first symbol; the empty prefix shifts to itself."""
    return p[1:]


def concat(p: Prefix, q: Prefix, max_depth: int | None = None) -> Prefix:
    """Concatenate prefixes, truncating to max_depth when given."""
    r = p + q
    if max_depth is not None and len(r) > max_depth:
        return r[:max_depth]
    return r


def parse_address(text: str) -> Prefix:
    """Parse the CLI address syntax: digits 1-9, empty string for the
    all-ones address."""
    out = []
    for ch in text:
        if ch < "1" or ch > "9":
            raise ValueError(f"bad address character {ch!r} in {text!r}")
        out.append(int(ch))
    return tuple(out)


def format_address(p: Prefix) -> str:
    if any(s > 9 for s in p):
        raise ValueError("addresses with symbols above 9 have no digit syntax")
    return "".join(str(s) for s in p)


@dataclass(frozen=True)
class ReverseAccumulator:
    """Bounded most-recent-first symbol window.

    After pushing s1, s2, ..., sk the reading is sk s(k-1) ... truncated
    to the configured depth, with an implicit all-ones tail.  This is the
    reverse address built up step by step while running a random orbit.
    """

    depth: int
    symbols: Prefix = ()

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("accumulator depth must be >= 1")
        if len(self.symbols) > self.depth:
            raise ValueError("accumulator overfull")

    def push(self, s: int) -> "ReverseAccumulator":
        if not 1 <= s <= MAX_SYMBOL:
            raise ValueError(f"symbol {s} out of range")
        return ReverseAccumulator(self.depth, (s,) + self.symbols[: self.depth - 1])

    def read(self) -> Prefix:
        return self.symbols


def acc_push(acc: ReverseAccumulator, s: int) -> ReverseAccumulator:
    """Push a symbol onto a reverse accumulator, returning the new one."""
    return acc.push(s)

"""Plain-text IFS config documents.

One `key = value` assignment per line; `map` rows repeat, one per map,
with six numbers in a b c d e l order.  Example:

    name = demo
    map = 0.5 0 0 0 0.5 0
    map = 0.5 0 0.5 0 0.5 0
    probabilities = 0.5 0.5
    viewport = 0 0 1 1
"""

from __future__ import annotations

from .ifs import IFS, AffineMap2, UNIT_SQUARE, Viewport, validate_hyperbolic


class ConfigError(ValueError):
    """Malformed IFS config document."""


def parse_ifs_config(text: str) -> tuple[str, IFS]:
    """Parse a config document; returns (name, IFS)."""
    name = ""
    maps = []
    probabilities = None
    viewport = UNIT_SQUARE
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key = key.strip()
        value = value.strip()
        if key == "name":
            name = value
        elif key == "map":
            maps.append(AffineMap2(*_numbers(value, 6, lineno)))
        elif key == "probabilities":
            probabilities = _numbers(value, None, lineno)
        elif key == "viewport":
            viewport = Viewport(*_numbers(value, 4, lineno))
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if not maps:
        raise ConfigError("config defines no maps")
    try:
        ifs = validate_hyperbolic(maps, probabilities, viewport)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return name, ifs


def serialize_ifs_config(name: str, ifs: IFS) -> str:
    lines = []
    if name:
        lines.append(f"name = {name}")
    for m in ifs.maps:
        lines.append("map = " + " ".join(_fmt(v) for v in m.coefficients()))
    lines.append("probabilities = " + " ".join(_fmt(p) for p in ifs.probabilities))
    vp = ifs.viewport
    lines.append(
        "viewport = " + " ".join(_fmt(v) for v in (vp.xmin, vp.ymin, vp.xmax, vp.ymax))
    )
    return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return repr(float(v))


def _numbers(value: str, count: int | None, lineno: int) -> list[float]:
    try:
        nums = [float(tok) for tok in value.split()]
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: non-numeric value {value!r}") from exc
    if count is not None and len(nums) != count:
        raise ConfigError(f"line {lineno}: expected {count} numbers, got {len(nums)}")
    return nums

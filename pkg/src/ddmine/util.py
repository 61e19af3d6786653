"""Small numeric helpers shared across modules."""

from __future__ import annotations

import math

# Products like 0.9 * 10 or 0.0005 * 4000 come out a few ulps off an integer;
# thresholds derived from them must not jump a grid cell because of that.
_SNAP = 1e-9


def ceil_snap(x: float) -> int:
    """Ceiling that treats values within 1e-9 of an integer as that integer."""
    r = round(x)
    if abs(x - r) < _SNAP:
        return int(r)
    return math.ceil(x)


def floor_snap(x: float) -> int:
    """Floor that treats values within 1e-9 of an integer as that integer."""
    r = round(x)
    if abs(x - r) < _SNAP:
        return int(r)
    return math.floor(x)

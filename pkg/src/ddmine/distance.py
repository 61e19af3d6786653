"""Per-attribute distance functions, base-interval grids, and the triangular
pair-index arithmetic that maps a linear pair id to a tuple pair.

Distance values are always non-negative integers on a step-1 grid:

* numeric   -- floor(|v1 - v2| / divisor)
* text      -- words appearing in one value but not the other (multiset
               symmetric difference over whitespace tokens)
* taxonomy  -- edges on the path between two labels in a rooted category tree
* boolean   -- 0 when equal, 1 otherwise

The per-attribute ``granularity`` does not rescale distances; it is the block
width used when the distance axis is cut into base intervals.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .datamodel import Interval
from .util import floor_snap

NUMERIC = "numeric"
TEXT = "text"
TAXONOMY = "taxonomy"
BOOLEAN = "boolean"

KINDS = (NUMERIC, TEXT, TAXONOMY, BOOLEAN)


class Taxonomy:
    """Rooted category tree parsed from the parenthesized form
    ``Root(child)(child(grandchild))``; distance between two labels is the
    number of edges on the path connecting them."""

    def __init__(self, text: str):
        self.parent: dict[str, str | None] = {}
        self.depth: dict[str, int] = {}
        root, pos = self._parse_node(text.strip(), 0, None, 0)
        if pos != len(text.strip()):
            raise ValueError(f"trailing characters in taxonomy: {text[pos:]!r}")
        self.root = root

    def _parse_node(self, text: str, pos: int, parent: str | None, depth: int) -> tuple[str, int]:
        start = pos
        while pos < len(text) and text[pos] not in "()":
            pos += 1
        label = text[start:pos].strip()
        if not label:
            raise ValueError(f"empty label at position {start} in taxonomy")
        if label in self.parent:
            raise ValueError(f"duplicate taxonomy label {label!r}")
        self.parent[label] = parent
        self.depth[label] = depth
        while pos < len(text) and text[pos] == "(":
            _, inner_end = self._parse_node(text, pos + 1, label, depth + 1)
            pos = inner_end
            if pos >= len(text) or text[pos] != ")":
                raise ValueError("unbalanced parentheses in taxonomy")
            pos += 1
        return label, pos

    def __contains__(self, label: str) -> bool:
        return label in self.parent

    @property
    def labels(self) -> list[str]:
        return list(self.parent)

    def distance(self, a: str, b: str) -> int:
        if a not in self.parent or b not in self.parent:
            missing = a if a not in self.parent else b
            raise ValueError(f"label {missing!r} not in taxonomy")
        # walk both nodes up to their lowest common ancestor
        x, y, steps = a, b, 0
        while self.depth[x] > self.depth[y]:
            x, steps = self.parent[x], steps + 1
        while self.depth[y] > self.depth[x]:
            y, steps = self.parent[y], steps + 1
        while x != y:
            x, y, steps = self.parent[x], self.parent[y], steps + 2
        return steps

    def max_distance(self) -> int:
        labels = self.labels
        return max(
            (self.distance(a, b) for i, a in enumerate(labels) for b in labels[i + 1:]),
            default=0,
        )


@dataclass(frozen=True)
class AttributeSpec:
    """Configuration of one column: how distances are computed and how the
    distance axis is cut into base intervals.

    ``ur`` is the upper end of the interesting distance range; None means
    everything observed is interesting.  ``granularity`` is the base-interval
    block width on the distance grid.
    """

    name: str
    kind: str
    divisor: float = 1.0
    granularity: int = 1
    ur: int | None = None
    taxonomy: Taxonomy | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown attribute kind {self.kind!r}")
        if self.divisor <= 0:
            raise ValueError("divisor must be positive")
        if self.granularity < 1:
            raise ValueError("granularity must be a positive grid step")
        if self.ur is not None and self.ur < 0:
            raise ValueError("ur must be non-negative")
        if self.kind == TAXONOMY and self.taxonomy is None:
            raise ValueError(f"attribute {self.name!r} is a taxonomy but has no tree")


def _word_multiset(value: str) -> Counter:
    return Counter(value.split())


def distance(spec: AttributeSpec, v1, v2) -> int:
    """Grid distance between two parsed cell values of one attribute."""
    if spec.kind == NUMERIC:
        return floor_snap(abs(v1 - v2) / spec.divisor)
    if spec.kind == TEXT:
        a, b = _word_multiset(v1), _word_multiset(v2)
        return sum(((a - b) + (b - a)).values())
    if spec.kind == TAXONOMY:
        return spec.taxonomy.distance(v1, v2)
    if spec.kind == BOOLEAN:
        return 0 if v1 == v2 else 1
    raise ValueError(f"unknown attribute kind {spec.kind!r}")


def build_base_intervals(maxd: int, g: int, ur: int) -> list[Interval]:
    """Cut the distance axis [0, maxd] into base intervals.

    Width-g blocks tile the interesting range so that the last one ends
    exactly at ur; any remainder is absorbed by the lowest block.  Distances
    above ur, when present, all fall into one trailing catch-all block.

    With g=1 the interesting blocks are the singletons [0,0],[1,1],...,[ur,ur].
    """
    if maxd < 0 or ur < 0 or g < 1:
        raise ValueError("maxd, ur must be non-negative and g positive")
    if ur > maxd:
        raise ValueError(f"ur={ur} exceeds maxd={maxd}")
    blocks: list[Interval] = []
    hi = ur
    while hi >= 0:
        lo = hi - g + 1
        if lo < g:
            lo = 0
        blocks.append(Interval(lo, hi))
        hi = lo - 1
    blocks.reverse()
    if maxd > ur:
        blocks.append(Interval(ur + 1, maxd))
    return blocks


@dataclass
class DistanceSchema:
    """All configured attributes with their data-derived distance grids.

    Attribute ids are dense integers in column-config order.  Base intervals
    per attribute are disjoint, adjacent in sequence, and cover [0, maxd].
    """

    attrs: list[AttributeSpec]
    maxd: list[int]
    base_intervals: list[list[Interval]]
    name_to_id: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.name_to_id = {spec.name: i for i, spec in enumerate(self.attrs)}

    @classmethod
    def build(cls, specs: Sequence[AttributeSpec], columns: Sequence[Sequence]) -> "DistanceSchema":
        """Derive per-attribute maxd from the data and build the base grids.

        maxd is the largest pairwise distance, computed over distinct values
        so no quadratic pass over rows is needed.
        """
        if len(specs) != len(columns):
            raise ValueError("one column of values per attribute spec required")
        maxd: list[int] = []
        grids: list[list[Interval]] = []
        for spec, column in zip(specs, columns):
            md = _max_pair_distance(spec, column)
            ur = md if spec.ur is None else min(spec.ur, md)
            maxd.append(md)
            grids.append(build_base_intervals(md, spec.granularity, ur))
        return cls(attrs=list(specs), maxd=maxd, base_intervals=grids)

    @property
    def names(self) -> list[str]:
        return [spec.name for spec in self.attrs]

    def ur(self, attr: int) -> int:
        """Effective interesting limit: configured ur clamped to observed maxd."""
        spec = self.attrs[attr]
        return self.maxd[attr] if spec.ur is None else min(spec.ur, self.maxd[attr])

    def n_attrs(self) -> int:
        return len(self.attrs)


def _max_pair_distance(spec: AttributeSpec, column: Sequence) -> int:
    if len(column) < 2:
        return 0
    if spec.kind == NUMERIC:
        return distance(spec, min(column), max(column))
    if spec.kind == BOOLEAN:
        return 1 if len(set(column)) > 1 else 0
    distinct = sorted(set(column))
    best = 0
    for i, a in enumerate(distinct):
        for b in distinct[i + 1:]:
            d = distance(spec, a, b)
            if d > best:
                best = d
    return best


def total_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_to_index(x: int, y: int, n: int) -> int:
    """1-based linear id of the pair (x, y), x < y, in the row-major order
    (0,1),(0,2),...,(0,n-1),(1,2),..."""
    if not (0 <= x < y < n):
        raise ValueError(f"invalid pair ({x},{y}) for n={n}")
    return (2 * n - 1 - x) * x // 2 + (y - x)


def pair_index_to_tuples(i: int, n: int) -> tuple[int, int]:
    """Invert the triangular linearization: pair id -> (x, y) with x < y.

    The closed-form row estimate can land one row past the boundary when i is
    the last pair of a row; the correction loop steps back in that case.
    """
    if n < 2:
        raise ValueError("need at least two tuples")
    if not (1 <= i <= total_pairs(n)):
        raise ValueError(f"pair index {i} out of range for n={n}")
    m = 2 * n - 1
    x = int((m - math.sqrt(m * m - 8 * i)) / 2)
    di = i - (m - x) * x // 2
    while di <= 0:
        x -= 1
        di = i - (m - x) * x // 2
    return x, x + di


def pair_ids_to_tuples(ids: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized pair_index_to_tuples over an array of 1-based pair ids."""
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    if ids.min() < 1 or ids.max() > total_pairs(n):
        raise ValueError("pair id out of range")
    m = 2 * n - 1
    x = ((m - np.sqrt(m * m - 8.0 * ids)) / 2).astype(np.int64)
    di = ids - (m - x) * x // 2
    while np.any(over := di <= 0):
        x[over] -= 1
        di = ids - (m - x) * x // 2
    return x, x + di

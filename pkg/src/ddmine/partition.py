"""Tuple-pair partitions and their ordered-set algebra.

A pair partition is the set of tuple pairs satisfying a differential
function, kept as a strictly ascending array of 1-based pair ids (the
triangular linearization from the distance module).  Keeping one canonical
order everywhere makes intersection and union linear merges and makes results
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .datamodel import Interval
from .distance import (
    AttributeSpec,
    BOOLEAN,
    NUMERIC,
    distance,
    pair_ids_to_tuples,
    total_pairs,
)


class PairPartition:
    """Immutable ascending set of pair ids."""

    __slots__ = ("ids",)

    def __init__(self, ids: np.ndarray):
        ids = np.asarray(ids, dtype=np.int64)
        if ids.ndim != 1:
            raise ValueError("pair ids must form a 1-d array")
        if ids.size > 1 and not np.all(np.diff(ids) > 0):
            raise ValueError("pair ids must be strictly ascending")
        if ids.size and ids[0] < 1:
            raise ValueError("pair ids are 1-based")
        ids.setflags(write=False)
        self.ids = ids

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> "PairPartition":
        return cls(np.asarray(sorted(set(ids)), dtype=np.int64))

    @classmethod
    def empty(cls) -> "PairPartition":
        return cls(np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.ids.size)

    def __eq__(self, other) -> bool:
        return isinstance(other, PairPartition) and np.array_equal(self.ids, other.ids)

    def __repr__(self) -> str:
        return f"PairPartition({self.ids.tolist()})"

    def to_set(self) -> set[int]:
        return set(self.ids.tolist())

    def pairs(self, n: int) -> list[tuple[int, int]]:
        """Decode to 0-based (x, y) tuple index pairs."""
        xs, ys = pair_ids_to_tuples(self.ids, n)
        return list(zip(xs.tolist(), ys.tolist()))


def intersect(a: PairPartition, b: PairPartition) -> PairPartition:
    return PairPartition(np.intersect1d(a.ids, b.ids, assume_unique=True))


def intersect_size(a: PairPartition, b: PairPartition) -> int:
    return int(np.intersect1d(a.ids, b.ids, assume_unique=True).size)


def union_adjacent(a: PairPartition, b: PairPartition) -> PairPartition:
    """Merge two disjoint partitions (of adjacent intervals) into one."""
    merged = np.union1d(a.ids, b.ids)
    if merged.size != a.ids.size + b.ids.size:
        raise ValueError("partitions overlap; union requires disjoint inputs")
    return PairPartition(merged)


def support(p: PairPartition, total: int) -> float:
    if total <= 0:
        raise ValueError("total pair count must be positive")
    return len(p) / total


@dataclass
class AttributePartition:
    """Base-interval partitions of one attribute, in ascending interval order.

    The entries are pairwise disjoint and jointly cover every pair of the
    universe: each pair sits in the unique entry whose interval contains its
    distance.
    """

    attr: int
    entries: list[tuple[Interval, PairPartition]]

    @property
    def intervals(self) -> list[Interval]:
        return [iv for iv, _ in self.entries]

    def partition_for(self, interval: Interval) -> PairPartition:
        for iv, part in self.entries:
            if iv == interval:
                return part
        raise KeyError(f"{interval} is not a base interval of attribute {self.attr}")

    def partition_covering(self, interval: Interval) -> PairPartition:
        """Pairs whose distance falls in `interval`, which must be a union of
        consecutive base intervals."""
        selected = [part.ids for iv, part in self.entries if interval.contains_interval(iv)]
        covered = sum(iv.width() for iv, _ in self.entries if interval.contains_interval(iv))
        if covered != interval.width():
            raise ValueError(
                f"{interval} is not a union of base intervals of attribute {self.attr}"
            )
        if not selected:
            return PairPartition.empty()
        merged = np.sort(np.concatenate(selected))
        return PairPartition(merged)


def pair_distances(
    column: Sequence,
    spec: AttributeSpec,
    pair_ids: np.ndarray,
    n: int,
) -> np.ndarray:
    """Distances of the given pairs on one attribute, aligned with pair_ids."""
    xs, ys = pair_ids_to_tuples(pair_ids, n)
    if spec.kind == NUMERIC:
        values = np.asarray(column, dtype=np.float64)
        diffs = np.abs(values[xs] - values[ys]) / spec.divisor
        return np.floor(diffs + 1e-9).astype(np.int64)
    if spec.kind == BOOLEAN:
        values = np.asarray(column, dtype=object)
        return (values[xs] != values[ys]).astype(np.int64)
    out = np.empty(pair_ids.size, dtype=np.int64)
    for k, (x, y) in enumerate(zip(xs.tolist(), ys.tolist())):
        out[k] = distance(spec, column[x], column[y])
    return out


def all_pair_ids(n: int) -> np.ndarray:
    return np.arange(1, total_pairs(n) + 1, dtype=np.int64)


def build_attribute_partition(
    column: Sequence,
    spec: AttributeSpec,
    intervals: Sequence[Interval],
    attr: int = 0,
    pair_ids: np.ndarray | None = None,
    n: int | None = None,
) -> AttributePartition:
    """Bucket every pair of the universe into the base interval holding its
    distance.  ``pair_ids`` restricts the universe (sampling); by default all
    n(n-1)/2 pairs are used."""
    if n is None:
        n = len(column)
    if pair_ids is None:
        pair_ids = all_pair_ids(n)
    dists = pair_distances(column, spec, pair_ids, n)
    entries: list[tuple[Interval, PairPartition]] = []
    assigned = 0
    for iv in intervals:
        mask = (dists >= iv.lo) & (dists <= iv.hi)
        part = PairPartition(pair_ids[mask])
        assigned += len(part)
        entries.append((iv, part))
    if assigned != pair_ids.size:
        raise ValueError(
            f"base intervals of attribute {attr} do not cover all observed distances"
        )
    return AttributePartition(attr=attr, entries=entries)

"""Core value types: distance intervals, differential functions, and the
differential dependencies built from them.

All distances live on an integer grid.  An interval ``[lo, hi]`` is a closed
range of grid distances; a differential function (DF) maps attribute ids to
intervals and is satisfied by a tuple pair when every per-attribute distance
falls inside its interval.  A differential dependency (DD) says: pairs
satisfying the lhs DF must have their rhs-attribute distance inside the rhs
interval.

Everything here is an immutable value, safe to hash, share and compare.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True)
class Interval:
    """Closed distance range [lo, hi] on an attribute's integer grid."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"invalid interval [{self.lo},{self.hi}]")

    def contains(self, d: int) -> bool:
        return self.lo <= d <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def width(self, g: int = 1) -> int:
        """Interval width counted in grid steps; a point interval has width g."""
        return self.hi - self.lo + g

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def interval_adjacent(a: Interval, b: Interval, g: int = 1) -> bool:
    """True when b starts where a ends, either sharing the endpoint or
    sitting exactly one grid step above it."""
    return a.hi == b.lo or a.hi + g == b.lo


def interval_combine(a: Interval, b: Interval, g: int = 1) -> Interval:
    """Combine two adjacent intervals into their covering range [a.lo, b.hi]."""
    if not interval_adjacent(a, b, g):
        raise ValueError(f"intervals {a} and {b} are not adjacent")
    return Interval(a.lo, b.hi)


def interval_hull(*intervals: Interval) -> Interval:
    """Smallest interval enclosing all the given ones."""
    if not intervals:
        raise ValueError("hull of no intervals")
    return Interval(min(iv.lo for iv in intervals), max(iv.hi for iv in intervals))


@dataclass(frozen=True, order=True)
class DifferentialFunction:
    """Conjunction of per-attribute interval predicates, sorted by attribute id.

    ``terms`` is a tuple of (attribute id, Interval) with strictly increasing
    ids; the canonical ordering makes prefix comparison and serialization
    deterministic.
    """

    terms: tuple[tuple[int, Interval], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("differential function must have at least one term")
        ids = [a for a, _ in self.terms]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise ValueError("terms must be strictly sorted by attribute id")

    @classmethod
    def of(cls, terms: Mapping[int, Interval] | Iterable[tuple[int, Interval]]) -> "DifferentialFunction":
        items = terms.items() if isinstance(terms, Mapping) else terms
        return cls(tuple(sorted(items, key=lambda t: t[0])))

    @property
    def attrs(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.terms)

    def get(self, attr: int) -> Interval | None:
        for a, iv in self.terms:
            if a == attr:
                return iv
        return None

    def has_attr(self, attr: int) -> bool:
        return self.get(attr) is not None

    def contains_df(self, other: "DifferentialFunction") -> bool:
        """True when every term of `other` appears here with the identical interval."""
        mine = set(self.terms)
        return all(t in mine for t in other.terms)

    def __len__(self) -> int:
        return len(self.terms)


def df_join(a: DifferentialFunction, b: DifferentialFunction) -> DifferentialFunction:
    """Join two DFs into one over the union of their attributes.

    Joinable only when shared attributes carry identical intervals.
    """
    merged = dict(a.terms)
    for attr, iv in b.terms:
        if attr in merged and merged[attr] != iv:
            raise ValueError(
                f"not joinable: attribute {attr} has intervals {merged[attr]} and {iv}"
            )
        merged[attr] = iv
    return DifferentialFunction.of(merged)


def df_subsumes(a: DifferentialFunction, b: DifferentialFunction) -> bool:
    """True when a constrains no more than b: every term of a has a matching
    term in b whose interval is contained in a's.  The subsumer has fewer
    dimensions and larger intervals."""
    lookup = dict(b.terms)
    for attr, iv in a.terms:
        other = lookup.get(attr)
        if other is None or not iv.contains_interval(other):
            return False
    return True


@dataclass(frozen=True, order=True)
class DifferentialDependency:
    """Single-rhs differential dependency with its quality scores.

    ``support`` and ``interestingness`` are carried metadata: two DDs are the
    same dependency when lhs, rhs attribute and rhs interval coincide,
    regardless of scores.
    """

    lhs: DifferentialFunction
    rhs_attr: int
    rhs_interval: Interval
    support: float = field(default=0.0, compare=False)
    interestingness: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.lhs.has_attr(self.rhs_attr):
            raise ValueError(f"rhs attribute {self.rhs_attr} occurs in lhs")
        if not 0.0 <= self.support <= 1.0:
            raise ValueError(f"support {self.support} out of [0,1]")

    def key(self) -> tuple:
        """Structural identity used for set comparisons and serialization order."""
        return (self.lhs.terms, self.rhs_attr, self.rhs_interval)


# Canonical text form: `A1[lo,hi] & A2[lo,hi] -> B[lo,hi]`

_TERM_RE = re.compile(r"^\s*(.+?)\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*$")


def format_df(df: DifferentialFunction, names: list[str]) -> str:
    return " & ".join(f"{names[a]}[{iv.lo},{iv.hi}]" for a, iv in df.terms)


def format_dd(dd: DifferentialDependency, names: list[str]) -> str:
    rhs = f"{names[dd.rhs_attr]}[{dd.rhs_interval.lo},{dd.rhs_interval.hi}]"
    return f"{format_df(dd.lhs, names)} -> {rhs}"


def _parse_term(text: str, name_to_id: Mapping[str, int]) -> tuple[int, Interval]:
    m = _TERM_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse term {text!r}")
    name, lo, hi = m.group(1), int(m.group(2)), int(m.group(3))
    if name not in name_to_id:
        raise ValueError(f"unknown attribute {name!r}")
    return name_to_id[name], Interval(lo, hi)


def parse_dd(line: str, name_to_id: Mapping[str, int]) -> DifferentialDependency:
    """Parse one canonical-text DD line back into a value.

    Round-trips exactly with format_dd for any schema whose attribute names
    contain neither '&' nor '->'.
    """
    if "->" not in line:
        raise ValueError(f"not a dependency line: {line!r}")
    lhs_text, rhs_text = line.rsplit("->", 1)
    lhs_terms = [_parse_term(t, name_to_id) for t in lhs_text.split("&")]
    rhs_attr, rhs_iv = _parse_term(rhs_text, name_to_id)
    return DifferentialDependency(
        lhs=DifferentialFunction.of(lhs_terms), rhs_attr=rhs_attr, rhs_interval=rhs_iv
    )

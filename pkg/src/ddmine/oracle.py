"""Brute-force reference implementation for correctness testing.

Everything here works straight off the raw pair distances with no partition
machinery: dependencies are verified by scanning all tuple pairs, and the
full minimal set on tiny inputs is found by enumerating every candidate lhs
over the base-interval grid.  Deliberately naive; guarded against anything
but desk-scale inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .datamodel import (
    DifferentialDependency,
    DifferentialFunction,
    Interval,
    interval_adjacent,
)
from .distance import DistanceSchema, distance
from .lattice import DiscoveryConfig
from .util import ceil_snap

_MAX_TUPLES = 12
_MAX_ATTRS = 5
_MAX_INTERVALS = 6

# lhs term and path types mirror DifferentialFunction.terms entries
Term = tuple[int, Interval]
Path = tuple[Term, ...]


@dataclass
class OracleResult:
    dd_set: list[DifferentialDependency]
    checked_candidates: int = 0
    satisfied_candidates: int = 0
    trace: dict = field(default_factory=dict)


def _pair_table(columns, schema: DistanceSchema) -> tuple[list[tuple[int, int]], list[list[int]]]:
    n = len(columns[0])
    pairs = list(combinations(range(n), 2))
    dists = [
        [distance(schema.attrs[a], columns[a][x], columns[a][y]) for x, y in pairs]
        for a in range(schema.n_attrs())
    ]
    return pairs, dists


def verify_dd(columns, schema: DistanceSchema, dd: DifferentialDependency, epsilon: float = 1.0) -> bool:
    """Check one dependency by direct pairwise scan.

    With epsilon = 1 every lhs-satisfying pair must land inside the rhs
    interval.  With epsilon < 1 the lhs pairs are ordered by rhs distance and
    only the ceil(epsilon * m) closest ones must land inside.
    """
    pairs, dists = _pair_table(columns, schema)
    lhs_idx = [
        k
        for k in range(len(pairs))
        if all(iv.contains(dists[a][k]) for a, iv in dd.lhs.terms)
    ]
    if not lhs_idx:
        return True
    rhs_d = sorted(dists[dd.rhs_attr][k] for k in lhs_idx)
    keep = len(rhs_d) if epsilon >= 1.0 else max(1, ceil_snap(epsilon * len(rhs_d)))
    return all(dd.rhs_interval.contains(d) for d in rhs_d[:keep])


def _interval_of(d: int, intervals: list[Interval]) -> Interval:
    for iv in intervals:
        if iv.contains(d):
            return iv
    raise ValueError(f"distance {d} outside the base grid")


def discover_brute(
    columns,
    schema: DistanceSchema,
    cfg: DiscoveryConfig,
    max_lhs: int | None = None,
) -> OracleResult:
    """Exhaustive minimal-DD discovery on tiny inputs.

    Enumerates every lhs over base intervals level by level, computes the
    tightest (epsilon-trimmed) rhs interval per free attribute from the
    sorted raw distances, and then reduces the candidate set: lhs containing
    the joined pattern of an already-determined base-interval DD are dropped,
    dependencies whose lhs extends another dependency with the identical rhs
    are dropped, and finally adjacent-interval siblings are combined exactly
    like the prefix-tree does, processing candidates in canonical order.
    """
    n = len(columns[0])
    m_attrs = schema.n_attrs()
    if n > _MAX_TUPLES or m_attrs > _MAX_ATTRS or any(
        len(ivs) > _MAX_INTERVALS for ivs in schema.base_intervals
    ):
        raise ValueError("input too large for the brute-force oracle")
    if n < 2 or m_attrs < 2:
        raise ValueError("need at least two tuples and two attributes")

    pairs, dists = _pair_table(columns, schema)
    total = len(pairs)
    delta_count = ceil_snap(cfg.min_support * total)
    ur = [schema.ur(a) for a in range(m_attrs)]
    max_lhs = min(max_lhs or m_attrs, m_attrs)

    checked = 0
    satisfied = 0
    cores: set[frozenset[Term]] = set()
    accepted: list[tuple[Path, int, Interval]] = []
    kept_keys: dict[tuple[int, Interval], list[frozenset[Term]]] = {}

    for size in range(1, max_lhs + 1):
        nodes: list[Path] = []
        for attrs in combinations(range(m_attrs), size):
            for choice in product(*(schema.base_intervals[a] for a in attrs)):
                nodes.append(tuple(zip(attrs, choice)))
        nodes.sort()
        for lhs_terms in nodes:
            lhs_set = frozenset(lhs_terms)
            if any(core <= lhs_set for core in cores):
                continue
            sat = [
                k
                for k in range(total)
                if all(iv.contains(dists[a][k]) for a, iv in lhs_terms)
            ]
            if not sat or len(sat) < delta_count:
                continue
            for b in range(m_attrs):
                if any(a == b for a, _ in lhs_terms):
                    continue
                checked += 1
                rhs_d = sorted(dists[b][k] for k in sat)
                keep = max(1, ceil_snap(cfg.epsilon * len(rhs_d)))
                lo = _interval_of(rhs_d[0], schema.base_intervals[b]).lo
                hi = _interval_of(rhs_d[keep - 1], schema.base_intervals[b]).hi
                w = Interval(lo, hi)
                if w.hi > ur[b]:
                    continue
                satisfied += 1
                if w in schema.base_intervals[b]:
                    cores.add(lhs_set | {(b, w)})
                # implied when an accepted dependency with the identical rhs
                # has a strictly smaller lhs
                key = (b, w)
                siblings = kept_keys.setdefault(key, [])
                if any(prev < lhs_set for prev in siblings):
                    continue
                siblings.append(lhs_set)
                accepted.append((lhs_terms, b, w))

    final = _combine_like_tree(accepted)
    dds = sorted(
        DifferentialDependency(
            lhs=DifferentialFunction(path), rhs_attr=b, rhs_interval=w
        )
        for path, b, w in final
    )
    return OracleResult(
        dd_set=dds,
        checked_candidates=checked,
        satisfied_candidates=satisfied,
        trace={"cores": len(cores), "accepted_raw": len(accepted)},
    )


def _combine_like_tree(accepted: list[tuple[Path, int, Interval]]) -> set[tuple[Path, int, Interval]]:
    """Adjacent-interval combination with the same semantics as the DD-tree.

    Two sibling values at one lhs position merge only when the sets of path
    suffixes hanging below them are identical, walking each freshly added
    path bottom-up; processing order is the canonical emission order, which
    the caller guarantees.
    """
    groups: dict[tuple[int, Interval], set[Path]] = {}
    for path, b, w in accepted:
        paths = groups.setdefault((b, w), set())
        paths.add(path)
        p = path
        for pos in range(len(p) - 1, -1, -1):
            while True:
                merged = _merge_at(paths, p, pos)
                if merged is None:
                    break
                p = merged
    return {(path, b, w) for (b, w), paths in groups.items() for path in paths}


def _merge_at(paths: set[Path], p: Path, pos: int) -> Path | None:
    prefix = p[:pos]
    attr, iv = p[pos]

    def bundle(val: Term) -> frozenset:
        return frozenset(
            q[pos + 1:] for q in paths if len(q) > pos and q[:pos] == prefix and q[pos] == val
        )

    mine = bundle((attr, iv))
    sibling_values = sorted(
        {
            q[pos]
            for q in paths
            if len(q) > pos and q[:pos] == prefix and q[pos][0] == attr and q[pos] != (attr, iv)
        },
        key=lambda t: (t[1].lo, t[1].hi),
    )
    for sib in sibling_values:
        s_iv = sib[1]
        if interval_adjacent(iv, s_iv):
            new_iv = Interval(iv.lo, s_iv.hi)
        elif interval_adjacent(s_iv, iv):
            new_iv = Interval(s_iv.lo, iv.hi)
        else:
            continue
        if bundle(sib) != mine:
            continue
        touched = [
            q
            for q in paths
            if len(q) > pos and q[:pos] == prefix and q[pos] in ((attr, iv), sib)
        ]
        for q in touched:
            paths.discard(q)
        for q in touched:
            paths.add(prefix + ((attr, new_iv),) + q[pos + 1:])
        return prefix + ((attr, new_iv),) + p[pos + 1:]
    return None

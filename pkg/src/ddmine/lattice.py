"""Level-wise lattice search for minimal differential dependencies.

The search fixes candidate lhs differential functions (lattice nodes whose
intervals are all base intervals) level by level and computes the tightest
rhs interval for every remaining attribute directly from partition overlaps.
Nodes carry the satisfied base-interval DDs of their sub-DFs so that lhs
containing an already-determined (lhs, rhs) pair are dropped, and candidate
DDs are checked against the DD-tree index before being accepted.

The emitted set is read back off the DD-trees, so dependencies that held for
runs of adjacent base intervals come out with one combined lhs interval.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .datamodel import (
    DifferentialDependency,
    DifferentialFunction,
    Interval,
    df_join,
)
from .ddtree import DDTreeIndex
from .distance import DistanceSchema
from .partition import (
    AttributePartition,
    PairPartition,
    all_pair_ids,
    build_attribute_partition,
    intersect,
    intersect_size,
)
from .util import ceil_snap


@dataclass
class DiscoveryConfig:
    """Thresholds steering the search.

    epsilon: fraction of lhs pairs, lowest rhs distance first, that must fall
    inside the rhs interval (1.0 means exact satisfaction).
    min_support: minimum fraction of all pairs an lhs must cover.
    max_level: optional cap on lhs attribute count.
    threads: worker threads for the per-node rhs computation within a level.
    """

    epsilon: float = 1.0
    min_support: float = 0.0
    max_level: int | None = None
    threads: int = 1

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("satisfaction threshold out of range (0,1]")
        if not 0.0 <= self.min_support <= 1.0:
            raise ValueError("support threshold out of range")
        if self.max_level is not None and self.max_level < 1:
            raise ValueError("max_level must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass
class LatticeNode:
    """One lhs candidate: its DF, the pairs satisfying it, and the satisfied
    base-interval DDs carried up from its parents."""

    df: DifferentialFunction
    partition: PairPartition
    dds: set[DifferentialFunction] = field(default_factory=set)

    def sort_key(self):
        return tuple((a, iv.lo, iv.hi) for a, iv in self.df.terms)


@dataclass
class DiscoveryStats:
    """Counters for reporting and pruning diagnostics."""

    total_pairs: int = 0
    level_nodes: list[int] = field(default_factory=list)
    nodes_generated: int = 0
    nodes_support_pruned: int = 0
    nodes_reducible_removed: int = 0
    candidates_checked: int = 0
    trivial_skipped: int = 0
    dds_accepted: int = 0
    dds_implied: int = 0
    elapsed_seconds: float = 0.0


@dataclass
class DiscoveryResult:
    dds: list[DifferentialDependency]
    stats: DiscoveryStats
    # lhs-rhs join DFs of satisfied base-interval DDs, for pruning diagnostics
    cores: list[DifferentialFunction] = field(default_factory=list)


def level1_nodes(parts: list[AttributePartition]) -> list[LatticeNode]:
    """One node per (attribute, base interval) with a non-empty partition."""
    nodes = []
    for ap in parts:
        for iv, part in ap.entries:
            if len(part) > 0:
                nodes.append(
                    LatticeNode(df=DifferentialFunction.of({ap.attr: iv}), partition=part)
                )
    nodes.sort(key=LatticeNode.sort_key)
    return nodes


def join_nodes(v1: LatticeNode, v2: LatticeNode) -> LatticeNode | None:
    """Join two same-level nodes sharing all but their final term.

    Returns None unless the leading terms are identical and the tail terms
    are of different attributes; the joined node intersects the partitions
    and unions the carried DDs.
    """
    t1, t2 = v1.df.terms, v2.df.terms
    if len(t1) != len(t2):
        return None
    if t1[:-1] != t2[:-1]:
        return None
    (a1, iv1), (a2, iv2) = t1[-1], t2[-1]
    if a1 == a2:
        return None
    if a1 > a2:
        (a1, iv1), (a2, iv2) = (a2, iv2), (a1, iv1)
    df = DifferentialFunction(t1[:-1] + ((a1, iv1), (a2, iv2)))
    return LatticeNode(
        df=df,
        partition=intersect(v1.partition, v2.partition),
        dds=v1.dds | v2.dds,
    )


def find_rhs(
    lhs_part: PairPartition, attr_part: AttributePartition, epsilon: float
) -> Interval | None:
    """Tightest rhs interval for one candidate, scanning base partitions.

    Right end: walk the attribute partition from the widest interval down,
    accumulating overlap with the lhs; stop at the first position where the
    accumulated tail exceeds the allowed (1 - epsilon) fraction.  Left end:
    the first interval (from below) with any overlap.  The strict comparison
    is done as epsilon > (m - cnt)/m so that an exactly (1-epsilon)-sized
    tail is dropped even when epsilon has no exact binary representation.
    """
    m = len(lhs_part)
    if m == 0:
        return None
    right = None
    cnt = 0
    for iv, part in reversed(attr_part.entries):
        cnt += intersect_size(lhs_part, part)
        if epsilon > (m - cnt) / m:
            right = iv.hi
            break
    left = None
    for iv, part in attr_part.entries:
        if intersect_size(lhs_part, part) > 0:
            left = iv.lo
            break
    if left is None or right is None:
        return None
    return Interval(left, right)


def interestingness(dd: DifferentialDependency, maxd: int, g: int = 1) -> float:
    """Support scaled by how narrow the rhs interval is relative to the whole
    distance range; point intervals score highest, full-range rhs scores the
    bare support."""
    return dd.support / (dd.rhs_interval.width(g) / Interval(0, maxd).width(g))


def _is_reducible(node: LatticeNode, cores: set[DifferentialFunction]) -> bool:
    """A node whose DF contains the joined lhs-rhs DF of a satisfied
    base-interval DD is reducible: any DD it would yield has a shorter
    equivalent from the node without that rhs term.

    The registry holds every such DF found so far.  Carrying them only along
    join parents would miss sub-DFs that are not lattice ancestors (a join
    always drops one of the two highest attributes), so the check consults
    the global registry; node.dds mirrors the subset that flowed through the
    node's own parents.
    """
    return any(node.df.contains_df(carried) for carried in cores)


def build_partitions(
    columns: list,
    schema: DistanceSchema,
    pair_ids=None,
    n: int | None = None,
) -> list[AttributePartition]:
    if n is None:
        n = len(columns[0])
    if pair_ids is None:
        pair_ids = all_pair_ids(n)
    return [
        build_attribute_partition(
            columns[a], schema.attrs[a], schema.base_intervals[a],
            attr=a, pair_ids=pair_ids, n=n,
        )
        for a in range(schema.n_attrs())
    ]


def discover(
    columns: list,
    schema: DistanceSchema,
    cfg: DiscoveryConfig,
    pair_ids=None,
) -> DiscoveryResult:
    """Run the full search over the given pair universe and return the
    combined minimal DDs with support and interestingness filled in."""
    n = len(columns[0]) if columns else 0
    if n < 2:
        raise ValueError("discovery needs at least two tuples")
    if schema.n_attrs() < 2:
        raise ValueError("discovery needs at least two configured attributes")
    start = time.perf_counter()
    if pair_ids is None:
        pair_ids = all_pair_ids(n)
    total = int(len(pair_ids))
    if total == 0:
        raise ValueError("empty pair universe")

    parts = build_partitions(columns, schema, pair_ids=pair_ids, n=n)
    base_sets = [set(ivs) for ivs in schema.base_intervals]
    ur = [schema.ur(a) for a in range(schema.n_attrs())]
    delta_count = ceil_snap(cfg.min_support * total)

    stats = DiscoveryStats(total_pairs=total)
    index = DDTreeIndex()
    cores: set[DifferentialFunction] = set()

    level = [nd for nd in level1_nodes(parts) if len(nd.partition) >= delta_count]
    stats.nodes_generated += len(level)
    max_level = cfg.max_level or schema.n_attrs()

    level_no = 1
    while level and level_no <= max_level:
        stats.level_nodes.append(len(level))
        survivors: list[LatticeNode] = []
        for node in level:
            if _is_reducible(node, cores):
                stats.nodes_reducible_removed += 1
                continue
            survivors.append(node)

        candidates = _rhs_candidates(survivors, parts, cfg)
        for node, rhs_attr, interval in candidates:
            stats.candidates_checked += 1
            if interval.hi > ur[rhs_attr]:
                stats.trivial_skipped += 1
                continue
            dd = DifferentialDependency(
                lhs=node.df, rhs_attr=rhs_attr, rhs_interval=interval
            )
            if index.chk_imply(dd):
                stats.dds_accepted += 1
            else:
                stats.dds_implied += 1
            if interval in base_sets[rhs_attr]:
                rhs_df = DifferentialFunction.of({rhs_attr: interval})
                core = df_join(node.df, rhs_df)
                cores.add(core)
                node.dds.add(core)

        level = _next_level(survivors, delta_count, stats)
        level_no += 1

    dds = _decode(index, parts, schema, total)
    stats.elapsed_seconds = time.perf_counter() - start
    return DiscoveryResult(dds=dds, stats=stats, cores=sorted(cores))


def min_dd(
    columns: list,
    schema: DistanceSchema,
    cfg: DiscoveryConfig,
    pair_ids=None,
) -> list[DifferentialDependency]:
    """The discovery entry point: canonical sorted list of minimal DDs."""
    return discover(columns, schema, cfg, pair_ids=pair_ids).dds


def _rhs_candidates(
    survivors: list[LatticeNode],
    parts: list[AttributePartition],
    cfg: DiscoveryConfig,
) -> list[tuple[LatticeNode, int, Interval]]:
    """Tightest-rhs computation for every (node, free attribute) pair.

    Read-only over the partitions, so nodes can be scanned concurrently; the
    result keeps node order then attribute order, which fixes the emission
    order downstream.
    """
    n_attrs = len(parts)

    def rhs_for(node: LatticeNode):
        found = []
        lhs_attrs = set(node.df.attrs)
        for b in range(n_attrs):
            if b in lhs_attrs:
                continue
            interval = find_rhs(node.partition, parts[b], cfg.epsilon)
            if interval is not None:
                found.append((node, b, interval))
        return found

    if cfg.threads > 1 and len(survivors) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            per_node = list(pool.map(rhs_for, survivors))
    else:
        per_node = [rhs_for(node) for node in survivors]
    return [item for sub in per_node for item in sub]


def _next_level(
    survivors: list[LatticeNode], delta_count: int, stats: DiscoveryStats
) -> list[LatticeNode]:
    """Prefix-join within blocks of nodes sharing all but the last term."""
    nxt: list[LatticeNode] = []
    i = 0
    while i < len(survivors):
        j = i + 1
        prefix = survivors[i].df.terms[:-1]
        while j < len(survivors) and survivors[j].df.terms[:-1] == prefix:
            j += 1
        block = survivors[i:j]
        for a in range(len(block)):
            for b in range(a + 1, len(block)):
                child = join_nodes(block[a], block[b])
                if child is None:
                    continue
                stats.nodes_generated += 1
                if len(child.partition) >= delta_count:
                    nxt.append(child)
                else:
                    stats.nodes_support_pruned += 1
        i = j
    nxt.sort(key=LatticeNode.sort_key)
    return nxt


def _decode(
    index: DDTreeIndex,
    parts: list[AttributePartition],
    schema: DistanceSchema,
    total: int,
) -> list[DifferentialDependency]:
    """Read the combined dependencies back off the trees and score them."""
    out = []
    for rhs_attr, rhs_interval, path in index.all_paths():
        lhs = DifferentialFunction(path)
        joint = parts[rhs_attr].partition_covering(rhs_interval)
        for attr, interval in path:
            joint = intersect(joint, parts[attr].partition_covering(interval))
        supp = len(joint) / total
        dd = DifferentialDependency(
            lhs=lhs, rhs_attr=rhs_attr, rhs_interval=rhs_interval, support=supp
        )
        out.append(replace(dd, interestingness=interestingness(dd, schema.maxd[rhs_attr])))
    out.sort(key=DifferentialDependency.key)
    return out

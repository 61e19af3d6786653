"""Outlier reporting: comparing exact against approximate discovery.

A fully satisfied dependency whose rhs interval shrinks a lot once a small
fraction of pairs may be ignored is a strong outlier signal: the excluded
pairs are the ones stretching the interval.  For every (lhs, rhs attribute)
found under both thresholds the report carries the full interval w1, the
approximate interval w2, the width ratio w2/w1 (what survives the shrink)
and the reduction rr = (w1-w2)/w1; rows are ranked by ratio, smallest first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .datamodel import DifferentialDependency, format_dd
from .distance import DistanceSchema
from .lattice import DiscoveryConfig, DiscoveryStats, discover


@dataclass
class OutlierRow:
    full: DifferentialDependency
    approx: DifferentialDependency
    ratio: float
    rr: float


@dataclass
class RunReport:
    epsilon: float
    rows: list[OutlierRow]
    unmatched_full: int
    unmatched_approx: int
    full_stats: DiscoveryStats
    approx_stats: DiscoveryStats
    names: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = ["support | ratio%  | rr%     | approximate dd"]
        for row in self.rows:
            out.append(
                f"{row.full.support * 100:7.2f} | {row.ratio * 100:7.2f} | "
                f"{row.rr * 100:7.2f} | {format_dd(row.approx, self.names)}"
            )
        out.append(
            f"# pairs without an epsilon-partner: {self.unmatched_full} full, "
            f"{self.unmatched_approx} approximate"
        )
        return out


def outlier_report(
    columns,
    schema: DistanceSchema,
    cfg: DiscoveryConfig,
) -> RunReport:
    """Run discovery at full satisfaction and at cfg.epsilon, pair the
    results by identical lhs and rhs attribute, and rank by interval ratio."""
    if cfg.epsilon >= 1.0:
        raise ValueError("outlier report needs an approximate threshold below 1")
    full_cfg = DiscoveryConfig(
        epsilon=1.0,
        min_support=cfg.min_support,
        max_level=cfg.max_level,
        threads=cfg.threads,
    )
    full = discover(columns, schema, full_cfg)
    approx = discover(columns, schema, cfg)

    approx_by_lhs = {(dd.lhs.terms, dd.rhs_attr): dd for dd in approx.dds}
    rows: list[OutlierRow] = []
    matched = set()
    for dd in full.dds:
        partner = approx_by_lhs.get((dd.lhs.terms, dd.rhs_attr))
        if partner is None:
            continue
        matched.add((dd.lhs.terms, dd.rhs_attr))
        w1 = dd.rhs_interval.width()
        w2 = partner.rhs_interval.width()
        rows.append(
            OutlierRow(full=dd, approx=partner, ratio=w2 / w1, rr=(w1 - w2) / w1)
        )
    rows.sort(key=lambda r: (r.ratio, r.full.key()))
    return RunReport(
        epsilon=cfg.epsilon,
        rows=rows,
        unmatched_full=len(full.dds) - len(rows),
        unmatched_approx=len(approx.dds) - len(matched),
        full_stats=full.stats,
        approx_stats=approx.stats,
        names=schema.names,
    )

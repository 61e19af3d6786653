"""Sampling machinery and error analysis.

Discovery cost grows with the fourth power of the row count, so large inputs
are mined through samples of the tuple-pair space.  This module quantifies
what sampling does to the result: the probability of missing a
well-supported dependency or picking up a poorly-supported one follows the
hypergeometric distribution, which also yields the sample size for a target
miss probability and the number of samples needed to cover a given fraction
of pairs.  Dependencies found across samples are combined by rhs-interval
hull, and three filters (file count, interval ratio, mean support) strip the
likely-spurious remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .datamodel import DifferentialDependency, Interval, interval_hull
from .distance import pair_index_to_tuples, total_pairs
from .util import ceil_snap

FILTER_FILECOUNT = "filecount"
FILTER_INTERVALRATIO = "intervalratio"
FILTER_SUPPORT = "support"


def _log_choose(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def hypergeom_pmf(N: int, M: int, n: int, k: int) -> float:
    """P(exactly k of the n draws hit the M marked items among N), drawn
    without replacement; evaluated in log space so large populations do not
    overflow."""
    if not 0 <= M <= N:
        raise ValueError(f"need 0 <= M <= N, got M={M}, N={N}")
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    if k < max(0, n - (N - M)) or k > min(M, n):
        return 0.0
    return math.exp(
        _log_choose(M, k) + _log_choose(N - M, n - k) - _log_choose(N, n)
    )


def p_missed(N: int, M: int, Ns: int, theta: float) -> float:
    """Probability that a dependency with M supporting pairs out of N falls
    below the support threshold in a size-Ns sample: the pmf summed over
    integer k < theta * Ns."""
    if theta < 0 or theta > 1:
        raise ValueError("theta must be in [0,1]")
    k_hi = ceil_snap(theta * Ns) - 1
    return sum(hypergeom_pmf(N, M, Ns, k) for k in range(0, k_hi + 1))


def p_unwanted(N: int, M: int, Ns: int, theta: float) -> float:
    """Probability that the sample shows at least theta * Ns supporting
    pairs; exact complement of p_missed."""
    return 1.0 - p_missed(N, M, Ns, theta)


def solve_sample_size(N: int, M: int, theta: float, target: float) -> int:
    """Smallest sample size whose miss probability is at most ``target``.

    The miss probability is not monotone across the points where
    ceil(theta*Ns) steps up, so the scan walks every candidate size.
    """
    if not 0.0 < target < 1.0:
        raise ValueError("target probability must be in (0,1)")
    for Ns in range(1, N + 1):
        if p_missed(N, M, Ns, theta) <= target:
            return Ns
    raise ValueError(
        f"no sample size up to N={N} reaches miss probability {target}"
    )


def num_samples(rate: float, coverage: float) -> int:
    """Samples needed so a pair appears in at least one with probability
    ``coverage``, at sample rate ``rate``: ceil(ln(1-coverage)/ln(1-rate))."""
    if not 0.0 < rate < 1.0:
        raise ValueError("sample rate must be in (0,1)")
    if not 0.0 < coverage < 1.0:
        raise ValueError("coverage must be in (0,1)")
    return max(1, ceil_snap(math.log(1.0 - coverage) / math.log(1.0 - rate)))


@dataclass(frozen=True)
class SamplePlan:
    """A reproducible sampling run over the pair space of an n-tuple table."""

    N: int
    Ns: int
    ns: int
    seed: int

    def __post_init__(self):
        if not 1 <= self.Ns <= self.N:
            raise ValueError(f"sample size {self.Ns} out of [1, {self.N}]")
        if self.ns < 1:
            raise ValueError("need at least one sample")

    @property
    def rate(self) -> float:
        return self.Ns / self.N


def draw_sample_ids(n: int, Ns: int, seed: int) -> np.ndarray:
    """Ns distinct pair ids drawn uniformly from [1, n(n-1)/2], ascending.

    Uses a PCG64 generator with Floyd-style selection, so draws are
    reproducible for a fixed seed and no full permutation is materialized.
    """
    N = total_pairs(n)
    if not 1 <= Ns <= N:
        raise ValueError(f"sample size {Ns} out of [1, {N}]")
    rng = np.random.Generator(np.random.PCG64(seed))
    ids = rng.choice(N, size=Ns, replace=False, shuffle=False).astype(np.int64) + 1
    return np.sort(ids)


def draw_sample(n: int, Ns: int, seed: int) -> list[tuple[int, int]]:
    """The sampled pairs as 0-based (x, y) tuple index pairs."""
    return [pair_index_to_tuples(int(i), n) for i in draw_sample_ids(n, Ns, seed)]


@dataclass
class CombinedDD:
    """One dependency after hull-combination across samples."""

    dd: DifferentialDependency
    file_count: int
    sample_intervals: dict[int, Interval]
    sample_supports: dict[int, float]

    @property
    def mean_support(self) -> float:
        return sum(self.sample_supports.values()) / len(self.sample_supports)

    def interval_ratio(self, g: int = 1) -> float:
        widths = [iv.width(g) for iv in self.sample_intervals.values()]
        return (sum(widths) / len(widths)) / self.dd.rhs_interval.width(g)


@dataclass
class SampledDDSet:
    """Per-sample dependency sets plus their hull-combined union."""

    per_sample: list[list[DifferentialDependency]]
    combined: list[CombinedDD] = field(init=False)

    def __post_init__(self):
        merged: dict[tuple, dict] = {}
        for idx, dds in enumerate(self.per_sample):
            for dd in dds:
                key = (dd.lhs.terms, dd.rhs_attr)
                slot = merged.setdefault(
                    key, {"intervals": {}, "supports": {}, "lhs": dd.lhs, "attr": dd.rhs_attr}
                )
                slot["intervals"][idx] = dd.rhs_interval
                slot["supports"][idx] = dd.support
        out = []
        for key in sorted(merged, key=lambda k: (k[0], k[1])):
            slot = merged[key]
            hull = interval_hull(*slot["intervals"].values())
            supports = slot["supports"]
            dd = DifferentialDependency(
                lhs=slot["lhs"],
                rhs_attr=slot["attr"],
                rhs_interval=hull,
                support=sum(supports.values()) / len(supports),
            )
            out.append(
                CombinedDD(
                    dd=dd,
                    file_count=len(slot["intervals"]),
                    sample_intervals=dict(slot["intervals"]),
                    sample_supports=dict(supports),
                )
            )
        self.combined = out

    def combined_dds(self) -> list[DifferentialDependency]:
        return [c.dd for c in self.combined]


def combine_dd_sets(sets: list[list[DifferentialDependency]]) -> SampledDDSet:
    """Merge sibling DDs (same lhs, same rhs attribute) from many sample runs
    into single DDs whose rhs interval is the hull of all siblings."""
    if not sets:
        raise ValueError("no dependency sets to combine")
    return SampledDDSet(per_sample=[list(s) for s in sets])


def error_rates(
    reference: list[DifferentialDependency],
    combined: list[DifferentialDependency],
) -> tuple[float, float]:
    """Missed and found-unwanted rates of a combined set against the
    reference set, both relative to the reference size; identity is exact on
    (lhs, rhs attribute, rhs interval)."""
    ref_keys = {dd.key() for dd in reference}
    got_keys = {dd.key() for dd in combined}
    if not ref_keys:
        raise ValueError("reference dependency set is empty")
    err_m = len(ref_keys - got_keys) / len(ref_keys)
    err_uw = len(got_keys - ref_keys) / len(ref_keys)
    return err_m, err_uw


def expected_error_counts(dds, N: int, Ns: int, theta: float) -> tuple[float, float]:
    """Expected numbers of missed and found-unwanted dependencies for one
    sample, summing per-DD probabilities.

    ``dds`` is an iterable of M_f values or (M_f, wanted) tuples; bare counts
    are classified against theta * N.
    """
    e_m = 0.0
    e_uw = 0.0
    for item in dds:
        if isinstance(item, tuple):
            m_f, wanted = item
        else:
            m_f = int(item)
            wanted = m_f >= theta * N
        if wanted:
            e_m += p_missed(N, m_f, Ns, theta)
        else:
            e_uw += p_unwanted(N, m_f, Ns, theta)
    return e_m, e_uw


def filter_dds(s: SampledDDSet, mode: str, value: float) -> list[DifferentialDependency]:
    """Keep combined DDs passing one of the three spuriousness filters."""
    if mode == FILTER_FILECOUNT:
        kept = [c for c in s.combined if c.file_count >= value]
    elif mode == FILTER_INTERVALRATIO:
        kept = [c for c in s.combined if c.interval_ratio() >= value]
    elif mode == FILTER_SUPPORT:
        kept = [c for c in s.combined if c.mean_support >= value]
    else:
        raise ValueError(f"unknown filter mode {mode!r}")
    return [c.dd for c in kept]

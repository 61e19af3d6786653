"""ddmine: discovery of minimal exact and approximate differential
dependencies from tabular data, plus sampling error analysis."""

from .datamodel import (
    DifferentialDependency,
    DifferentialFunction,
    Interval,
    df_join,
    df_subsumes,
    format_dd,
    format_df,
    interval_adjacent,
    interval_combine,
    interval_hull,
    parse_dd,
)
from .ddtree import DDTree, DDTreeIndex, chk_imply, combine, is_prefix
from .distance import (
    AttributeSpec,
    DistanceSchema,
    Taxonomy,
    build_base_intervals,
    distance,
    pair_index_to_tuples,
    pair_to_index,
    total_pairs,
)
from .ingest import DataError, Relation, ingest
from .lattice import (
    DiscoveryConfig,
    DiscoveryResult,
    LatticeNode,
    discover,
    find_rhs,
    interestingness,
    join_nodes,
    level1_nodes,
    min_dd,
)
from .oracle import OracleResult, discover_brute, verify_dd
from .partition import (
    AttributePartition,
    PairPartition,
    build_attribute_partition,
    intersect,
    support,
    union_adjacent,
)
from .report import RunReport, outlier_report
from .sampling import (
    SamplePlan,
    SampledDDSet,
    combine_dd_sets,
    draw_sample,
    draw_sample_ids,
    error_rates,
    expected_error_counts,
    filter_dds,
    hypergeom_pmf,
    num_samples,
    p_missed,
    p_unwanted,
    solve_sample_size,
)

__version__ = "0.1.0"

"""Command-line interface.

Subcommands:

* discover  -- mine minimal DDs from a CSV and write them in canonical text
* outliers  -- rank fully-satisfied DDs by how much an approximate run
               shrinks their rhs intervals
* plan      -- sample-size and number-of-samples calculator
* sample    -- draw pair samples, mine each, combine and optionally filter
* compare   -- missed / found-unwanted error rates between two DD files
* oracle    -- brute-force discovery on tiny inputs (test aid)

Exit codes: 0 success, 1 usage error, 2 data error.  Output files depend
only on inputs, flags and seed; timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .datamodel import DifferentialDependency, format_dd, parse_dd
from .distance import total_pairs
from .ingest import DataError, ingest
from .lattice import DiscoveryConfig, DiscoveryStats, discover
from .oracle import discover_brute
from .report import outlier_report
from .sampling import (
    combine_dd_sets,
    draw_sample_ids,
    error_rates,
    filter_dds,
    num_samples,
    solve_sample_size,
)
from .util import ceil_snap


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _discovery_config(args, defaults: dict) -> DiscoveryConfig:
    epsilon = args.epsilon if args.epsilon is not None else defaults.get("epsilon", 1.0)
    min_support = (
        args.min_support
        if args.min_support is not None
        else defaults.get("min_support", 0.0)
    )
    max_level = (
        args.max_level if args.max_level is not None else defaults.get("max_level")
    )
    try:
        return DiscoveryConfig(
            epsilon=epsilon,
            min_support=min_support,
            max_level=max_level,
            threads=getattr(args, "threads", 1),
        )
    except ValueError as e:
        raise UsageError(str(e))


def _write_lines(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + ("\n" if lines else "")
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dd_lines(dds: list[DifferentialDependency], names: list[str]) -> list[str]:
    return [format_dd(dd, names) for dd in dds]


def _dd_records(dds: list[DifferentialDependency], names: list[str]) -> list[str]:
    records = []
    for dd in dds:
        records.append(
            json.dumps(
                {
                    "lhs": [
                        {"attr": names[a], "lo": iv.lo, "hi": iv.hi}
                        for a, iv in dd.lhs.terms
                    ],
                    "rhs_attr": names[dd.rhs_attr],
                    "rhs": [dd.rhs_interval.lo, dd.rhs_interval.hi],
                    "support": dd.support,
                    "interestingness": dd.interestingness,
                },
                sort_keys=True,
            )
        )
    return records


def _stats_summary(stats: DiscoveryStats) -> str:
    return (
        f"pairs={stats.total_pairs} levels={stats.level_nodes} "
        f"nodes={stats.nodes_generated} reducible={stats.nodes_reducible_removed} "
        f"support_pruned={stats.nodes_support_pruned} "
        f"accepted={stats.dds_accepted} implied={stats.dds_implied} "
        f"trivial={stats.trivial_skipped} "
        f"time={stats.elapsed_seconds:.3f}s"
    )


def read_dd_file(path: str | Path) -> list[DifferentialDependency]:
    """Parse a canonical-text DD file.  Attribute ids are assigned from the
    sorted set of names appearing in the file, so two files over the same
    attributes compare consistently."""
    lines = [
        ln.strip()
        for ln in Path(path).read_text().splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    names = sorted(
        {m.group(1).strip() for ln in lines for m in re.finditer(r"([^&>\[\]]+?)\s*\[", ln)}
    )
    name_to_id = {nm: i for i, nm in enumerate(names)}
    return [parse_dd(ln, name_to_id) for ln in lines]


def read_dd_files(*paths: str | Path) -> list[list[DifferentialDependency]]:
    """Parse several DD files under one shared attribute-name registry."""
    all_lines = []
    for path in paths:
        lines = [
            ln.strip()
            for ln in Path(path).read_text().splitlines()
            if ln.strip() and not ln.strip().startswith("#")
        ]
        all_lines.append(lines)
    names = sorted(
        {
            m.group(1).strip()
            for lines in all_lines
            for ln in lines
            for m in re.finditer(r"([^&>\[\]]+?)\s*\[", ln)
        }
    )
    name_to_id = {nm: i for i, nm in enumerate(names)}
    return [[parse_dd(ln, name_to_id) for ln in lines] for lines in all_lines]


def cmd_discover(args) -> int:
    rel = ingest(args.input, args.config)
    cfg = _discovery_config(args, rel.defaults)
    result = discover(rel.columns, rel.schema, cfg)
    _write_lines(args.output, _dd_lines(result.dds, rel.schema.names))
    if args.records:
        Path(args.records).write_text(
            "\n".join(_dd_records(result.dds, rel.schema.names)) + "\n"
        )
    print(_stats_summary(result.stats), file=sys.stderr)
    return 0


def cmd_outliers(args) -> int:
    rel = ingest(args.input, args.config)
    cfg = _discovery_config(args, rel.defaults)
    if cfg.epsilon >= 1.0:
        raise UsageError("outliers needs --epsilon below 1")
    report = outlier_report(rel.columns, rel.schema, cfg)
    _write_lines(args.output, report.lines())
    print(
        f"full: {_stats_summary(report.full_stats)}",
        f"approx: {_stats_summary(report.approx_stats)}",
        sep="\n",
        file=sys.stderr,
    )
    return 0


def cmd_plan(args) -> int:
    lines = []
    if args.N is not None or args.M is not None or args.theta is not None:
        if None in (args.N, args.M, args.theta, args.p):
            raise UsageError("sample-size planning needs --N, --M, --theta and --p")
        try:
            ns_size = solve_sample_size(args.N, args.M, args.theta, args.p)
        except ValueError as e:
            raise UsageError(str(e))
        lines.append(f"Ns = {ns_size}")
    if args.rate is not None or args.coverage is not None:
        if None in (args.rate, args.coverage):
            raise UsageError("number-of-samples planning needs --rate and --coverage")
        try:
            lines.append(f"ns = {num_samples(args.rate, args.coverage)}")
        except ValueError as e:
            raise UsageError(str(e))
    if not lines:
        raise UsageError(
            "nothing to plan: give --N/--M/--theta/--p and/or --rate/--coverage"
        )
    _write_lines(args.output, lines)
    return 0


def _parse_filter(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise UsageError("filter must look like filecount=K, intervalratio=R or support=T")
    mode, raw = text.split("=", 1)
    mode = mode.strip()
    if mode not in ("filecount", "intervalratio", "support"):
        raise UsageError(f"unknown filter {mode!r}")
    try:
        return mode, float(raw)
    except ValueError:
        raise UsageError(f"filter threshold {raw!r} is not a number")


def cmd_sample(args) -> int:
    rel = ingest(args.input, args.config)
    cfg = _discovery_config(args, rel.defaults)
    n = rel.n_rows
    N = total_pairs(n)
    if args.sample_size is not None:
        Ns = args.sample_size
    elif args.rate is not None:
        if not 0.0 < args.rate <= 1.0:
            raise UsageError("sample rate out of (0,1]")
        Ns = max(1, ceil_snap(args.rate * N))
    else:
        raise UsageError("sample needs --rate or --sample-size")
    if not 1 <= Ns <= N:
        raise UsageError(f"sample size {Ns} out of [1, {N}]")
    ns = args.num_samples
    if ns < 1:
        raise UsageError("--num-samples must be at least 1")
    out = Path(args.output) if args.output else Path("combined.dds")

    per_sample = []
    manifest_samples = []
    for i in range(ns):
        sample_seed = args.seed + i
        ids = draw_sample_ids(n, Ns, sample_seed)
        result = discover(rel.columns, rel.schema, cfg, pair_ids=ids)
        sample_path = out.with_suffix(out.suffix + f".sample{i}.dds")
        sample_path.write_text(
            "\n".join(_dd_lines(result.dds, rel.schema.names)) + "\n"
        )
        per_sample.append(result.dds)
        manifest_samples.append(
            {"index": i, "seed": sample_seed, "dd_file": str(sample_path), "num_dds": len(result.dds)}
        )

    combined_set = combine_dd_sets(per_sample)
    if args.filter:
        mode, value = _parse_filter(args.filter)
        combined = sorted(filter_dds(combined_set, mode, value), key=DifferentialDependency.key)
    else:
        combined = sorted(combined_set.combined_dds(), key=DifferentialDependency.key)
    out.write_text("\n".join(_dd_lines(combined, rel.schema.names)) + "\n")

    manifest = {
        "seed": args.seed,
        "N": N,
        "Ns": Ns,
        "ns": ns,
        "rate": Ns / N,
        "epsilon": cfg.epsilon,
        "min_support": cfg.min_support,
        "filter": args.filter,
        "samples": manifest_samples,
        "combined_file": str(out),
        "num_combined": len(combined),
    }
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return 0


def cmd_compare(args) -> int:
    reference, combined = read_dd_files(args.reference, args.combined)
    try:
        err_m, err_uw = error_rates(reference, combined)
    except ValueError as e:
        raise DataError(str(e))
    _write_lines(args.output, [f"err_m = {err_m:.6f}", f"err_uw = {err_uw:.6f}"])
    return 0


def cmd_oracle(args) -> int:
    rel = ingest(args.input, args.config)
    cfg = _discovery_config(args, rel.defaults)
    result = discover_brute(rel.columns, rel.schema, cfg, max_lhs=args.max_level)
    _write_lines(args.output, _dd_lines(result.dd_set, rel.schema.names))
    print(
        f"candidates={result.checked_candidates} satisfied={result.satisfied_candidates}",
        file=sys.stderr,
    )
    return 0


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--config", required=True, help="JSON column configuration")
    p.add_argument("--epsilon", type=float, default=None, help="satisfaction threshold in (0,1]")
    p.add_argument("--min-support", type=float, default=None, help="support threshold in [0,1]")
    p.add_argument("--max-level", type=int, default=None, help="cap on lhs attribute count")
    p.add_argument("--output", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ddmine", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discover", help="mine minimal differential dependencies")
    _add_data_flags(p)
    p.add_argument("--records", default=None, help="also write JSONL records here")
    p.add_argument("--threads", type=int, default=1, help="worker threads within a level")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("outliers", help="rank DDs by interval shrink under approximation")
    _add_data_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_outliers)

    p = sub.add_parser("plan", help="sample size / number of samples calculator")
    p.add_argument("--N", type=int, default=None, help="total pair count")
    p.add_argument("--M", type=int, default=None, help="supporting pair count")
    p.add_argument("--theta", type=float, default=None, help="support threshold")
    p.add_argument("--p", type=float, default=None, help="target miss probability")
    p.add_argument("--rate", type=float, default=None, help="sample rate")
    p.add_argument("--coverage", type=float, default=None, help="pair coverage probability")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sample", help="sampled discovery with combination and filtering")
    _add_data_flags(p)
    p.add_argument("--rate", type=float, default=None, help="sample rate over pairs")
    p.add_argument("--sample-size", type=int, default=None, help="pairs per sample")
    p.add_argument("--num-samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--filter", default=None, help="filecount=K | intervalratio=R | support=T")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("compare", help="error rates of a combined set against a reference")
    p.add_argument("reference", help="reference DD file")
    p.add_argument("combined", help="combined DD file")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="brute-force discovery on tiny inputs")
    _add_data_flags(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"ddmine: error: {e}", file=sys.stderr)
        return 1
    except (DataError, ValueError) as e:
        print(f"ddmine: data error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

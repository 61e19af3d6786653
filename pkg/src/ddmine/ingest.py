"""CSV ingestion and column configuration.

The config file is JSON with one entry per column to be mined:

    {
      "columns": [
        {"name": "Age",  "kind": "numeric", "divisor": 1, "granularity": 1, "ur": 40},
        {"name": "City", "kind": "text"},
        {"name": "Work", "kind": "taxonomy", "taxonomy": "Work(never)(paid(full)(part))"}
      ],
      "epsilon": 1.0,
      "min_support": 0.0
    }

Columns absent from the config are ignored.  ``epsilon``/``min_support``/
``max_level`` are optional defaults that CLI flags override.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .distance import (
    AttributeSpec,
    BOOLEAN,
    DistanceSchema,
    KINDS,
    NUMERIC,
    TAXONOMY,
    Taxonomy,
)


class DataError(Exception):
    """Anything wrong with the input data or its configuration."""


@dataclass
class Relation:
    """Typed column store over the configured columns."""

    n_rows: int
    columns: list[list]
    schema: DistanceSchema
    defaults: dict = field(default_factory=dict)


def _parse_config(config_path: str | Path) -> tuple[list[dict], dict]:
    try:
        raw = json.loads(Path(config_path).read_text())
    except FileNotFoundError:
        raise DataError(f"config file not found: {config_path}")
    except json.JSONDecodeError as e:
        raise DataError(f"config file {config_path} is not valid JSON: {e}")
    if not isinstance(raw, dict) or "columns" not in raw:
        raise DataError("config must be an object with a 'columns' list")
    columns = raw["columns"]
    if not isinstance(columns, list) or not columns:
        raise DataError("config 'columns' must be a non-empty list")
    defaults = {
        k: raw[k] for k in ("epsilon", "min_support", "max_level") if k in raw
    }
    return columns, defaults


def _build_spec(entry: dict) -> AttributeSpec:
    if "name" not in entry or "kind" not in entry:
        raise DataError(f"column entry needs 'name' and 'kind': {entry}")
    kind = entry["kind"]
    if kind not in KINDS:
        raise DataError(
            f"column {entry['name']!r}: unknown kind {kind!r} (choose from {', '.join(KINDS)})"
        )
    taxonomy = None
    if kind == TAXONOMY:
        if "taxonomy" not in entry:
            raise DataError(f"column {entry['name']!r}: taxonomy kind needs a tree")
        try:
            taxonomy = Taxonomy(entry["taxonomy"])
        except ValueError as e:
            raise DataError(f"column {entry['name']!r}: bad taxonomy: {e}")
    try:
        return AttributeSpec(
            name=entry["name"],
            kind=kind,
            divisor=float(entry.get("divisor", 1.0)),
            granularity=int(entry.get("granularity", 1)),
            ur=None if entry.get("ur") is None else int(entry["ur"]),
            taxonomy=taxonomy,
        )
    except ValueError as e:
        raise DataError(f"column {entry['name']!r}: {e}")


def _parse_cell(spec: AttributeSpec, raw: str, row: int):
    if spec.kind == NUMERIC:
        try:
            return float(raw)
        except ValueError:
            raise DataError(
                f"row {row}, column {spec.name!r}: cannot parse {raw!r} as a number"
            )
    if spec.kind == TAXONOMY:
        label = raw.strip()
        if label not in spec.taxonomy:
            raise DataError(
                f"row {row}, column {spec.name!r}: label {label!r} not in taxonomy"
            )
        return label
    if spec.kind == BOOLEAN:
        return raw.strip()
    return raw


def ingest(csv_path: str | Path, config_path: str | Path) -> Relation:
    """Read the CSV and config into a typed column store with its distance
    schema (per-attribute maxd and base intervals derived from the data)."""
    entries, defaults = _parse_config(config_path)
    specs = [_build_spec(e) for e in entries]

    try:
        with open(csv_path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{csv_path}: empty file")
            rows = list(reader)
    except FileNotFoundError:
        raise DataError(f"input file not found: {csv_path}")

    header = [h.strip() for h in header]
    col_index: dict[str, int] = {}
    for spec in specs:
        if spec.name not in header:
            raise DataError(f"column {spec.name!r} not present in {csv_path}")
        col_index[spec.name] = header.index(spec.name)

    if not rows:
        raise DataError(f"{csv_path}: no data rows")

    columns: list[list] = [[] for _ in specs]
    for r, row in enumerate(rows, start=2):  # header is line 1
        if len(row) < len(header):
            raise DataError(f"row {r}: expected {len(header)} fields, got {len(row)}")
        for a, spec in enumerate(specs):
            columns[a].append(_parse_cell(spec, row[col_index[spec.name]], r))

    schema = DistanceSchema.build(specs, columns)
    return Relation(
        n_rows=len(rows), columns=columns, schema=schema, defaults=defaults
    )

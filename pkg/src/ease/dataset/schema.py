"""On-disk row schemas and their CSV encoding."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Optional

from .. import SCHEMA_VERSION

QUALITY_TARGETS = ("rf", "b_edge", "b_v", "b_src", "b_dst")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class QualityRow:
    graph_id: str
    graph_type: str
    num_vertices: int
    num_edges: int
    mean_degree: float
    density: float
    indeg_skew: float
    outdeg_skew: float
    avg_triangles: Optional[float]
    avg_lcc: Optional[float]
    partitioner_id: str
    k: int
    seed: int
    rf: float
    b_edge: float
    b_v: float
    b_src: float
    b_dst: float
    partition_time_ms: float
    schema_version: int = SCHEMA_VERSION

    def sort_key(self):
        return (self.graph_id, self.partitioner_id, self.k)


@dataclass(frozen=True)
class RuntimeRow:
    graph_id: str
    graph_type: str
    num_vertices: int
    num_edges: int
    partitioner_id: str
    k: int
    seed: int
    workload: str
    iterations: int
    rf: float
    b_edge: float
    b_v: float
    b_src: float
    b_dst: float
    # cost_per_iteration for fixed-iteration workloads, cost_total otherwise
    target: float
    target_kind: str
    cost_total: float
    partition_time_ms: float
    schema_version: int = SCHEMA_VERSION

    def sort_key(self):
        return (self.graph_id, self.partitioner_id, self.k, self.workload)


@dataclass(frozen=True)
class SkippedCell:
    graph_id: str
    partitioner_id: str
    k: int
    reason: str
    schema_version: int = SCHEMA_VERSION

    def sort_key(self):
        return (self.graph_id, self.partitioner_id, self.k)


_PARSERS = {"int": int, "float": float, "str": str, "Optional[float]": float}


def _encode(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows, cls) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(cls)])
    for r in sorted(rows, key=lambda r: r.sort_key()):
        w.writerow([_encode(v) for v in astuple(r)])
    return buf.getvalue()


def write_rows(path, rows, cls) -> None:
    Path(path).write_text(rows_to_csv(rows, cls), encoding="utf-8")


def read_rows(path, cls) -> list:
    """Parse a CSV written by :func:`write_rows`; column set and schema version must match."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        spec = {f.name: f.type for f in fields(cls)}
        missing = [c for c in spec if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        idx = {c: header.index(c) for c in spec}
        rows = []
        for line_no, rec in enumerate(reader, start=2):
            vals = {}
            for name, typ in spec.items():
                raw = rec[idx[name]]
                if raw == "" and typ.startswith("Optional"):
                    vals[name] = None
                else:
                    try:
                        vals[name] = _PARSERS[typ](raw)
                    except ValueError:
                        raise SchemaError(f"{path}:{line_no}: bad {name} value {raw!r}") from None
            if vals["schema_version"] != SCHEMA_VERSION:
                raise SchemaError(
                    f"{path}:{line_no}: schema_version {vals['schema_version']} != {SCHEMA_VERSION}"
                )
            rows.append(cls(**vals))
    return rows

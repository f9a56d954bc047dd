"""Training suites: generation to disk and the manifest that indexes them."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .. import SCHEMA_VERSION
from ..graph import Graph, RmatConfig, generate_rmat, load_edge_list, rmat_training_suite, write_edge_list
from .schema import SchemaError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteEntry:
    graph_id: str
    graph_type: str
    path: str
    combo: str = ""
    a: Optional[float] = None
    b: Optional[float] = None
    c: Optional[float] = None
    d: Optional[float] = None
    num_vertices: Optional[int] = None
    num_edges: Optional[int] = None
    seed: Optional[int] = None
    duplicates: str = "kept"
    schema_version: int = SCHEMA_VERSION

    def load(self) -> Graph:
        # ids are compacted, so vertices that no edge touches are dropped
        return load_edge_list(self.path, remap=True)


@dataclass(frozen=True)
class InMemoryGraph:
    graph_id: str
    graph: Graph
    graph_type: str = "rmat"
    combo: str = ""

    def load(self) -> Graph:
        return self.graph


def _fmt(v) -> str:
    return "" if v is None else (repr(v) if isinstance(v, float) else str(v))


def write_manifest(path, entries: list[SuiteEntry]) -> None:
    """Paths are stored relative to the manifest's directory."""
    path = Path(path)
    base = path.parent.resolve()
    names = [f.name for f in fields(SuiteEntry)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for e in sorted(entries, key=lambda e: e.graph_id):
            row = []
            for n in names:
                v = getattr(e, n)
                if n == "path":
                    p = Path(v).resolve()
                    v = p.relative_to(base).as_posix() if p.is_relative_to(base) else str(p)
                row.append(_fmt(v))
            w.writerow(row)


def read_manifest(path) -> list[SuiteEntry]:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"manifest not found: {path}")
    types = {f.name: f.type for f in fields(SuiteEntry)}
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for col in ("graph_id", "path"):
            if col not in (reader.fieldnames or []):
                raise SchemaError(f"{path}: missing column {col}")
        for rec in reader:
            vals = {}
            for name, typ in types.items():
                raw = rec.get(name)
                if raw is None or raw == "":
                    continue
                if "int" in typ:
                    vals[name] = int(raw)
                elif "float" in typ:
                    vals[name] = float(raw)
                else:
                    vals[name] = raw
            vals.setdefault("graph_type", "unknown")
            if vals.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
                raise SchemaError(f"{path}: schema_version {vals['schema_version']} != {SCHEMA_VERSION}")
            p = Path(vals["path"])
            if not p.is_absolute():
                vals["path"] = str(path.parent / p)
            out.append(SuiteEntry(**vals))
    ids = [e.graph_id for e in out]
    if len(set(ids)) != len(ids):
        raise SchemaError(f"{path}: duplicate graph_id")
    return out


def generate_suite(
    out_dir,
    preset: str = "small",
    scale: float = 1,
    seed: int = 0,
    combos: Optional[list[str]] = None,
    configs: Optional[list[RmatConfig]] = None,
) -> list[SuiteEntry]:
    """Write one edge list per R-MAT config plus ``manifest.csv``; duplicate edges are kept."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if configs is None:
        configs = rmat_training_suite(preset, seed_base=seed, scale=scale)
    if combos:
        configs = [c for c in configs if c.combo in set(combos)]
    entries = []
    for cfg in configs:
        path = out_dir / f"{cfg.config_id}.el"
        g = generate_rmat(cfg)
        header = (
            f"{cfg.config_id} a={cfg.a} b={cfg.b} c={cfg.c} d={cfg.d} "
            f"V={cfg.num_vertices} E={cfg.num_edges} seed={cfg.seed}"
        )
        write_edge_list(g, path, header=header)
        log.info("generated %s (%d edges)", cfg.config_id, g.num_edges)
        entries.append(
            SuiteEntry(
                graph_id=cfg.config_id, graph_type="rmat", path=str(path), combo=cfg.combo,
                a=cfg.a, b=cfg.b, c=cfg.c, d=cfg.d,
                num_vertices=cfg.num_vertices, num_edges=cfg.num_edges, seed=cfg.seed,
            )
        )
    write_manifest(out_dir / "manifest.csv", entries)
    return entries

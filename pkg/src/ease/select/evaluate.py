from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import SCHEMA_VERSION, __version__
from ..hashing import derive_seed
from ..graph import FeatureLevel, compute_properties
from ..predict import PredictorSuite, is_fixed_iteration
from .selector import argmin_objective, normalize_goal, select_partitioner

log = logging.getLogger(__name__)

STRATEGIES = ("S_PS", "S_O", "S_SRF", "S_R", "S_W")


@dataclass(frozen=True)
class StrategyCell:
    graph_id: str
    workload: str
    chosen: str
    optimal: str
    srf: str
    objectives: dict  # strategy -> achieved objective (ms)
    per_partitioner: dict  # partitioner -> true objective (ms)

    @property
    def hit(self) -> bool:
        return self.objectives["S_PS"] == self.objectives["S_O"]


@dataclass(frozen=True)
class StrategyComparison:
    goal: str
    cells: tuple
    seed: int = 0

    def mean(self, strategy: str, workload: Optional[str] = None) -> float:
        vals = [c.objectives[strategy] for c in self.cells if workload is None or c.workload == workload]
        return float(np.mean(vals)) if vals else float("nan")

    def ratio(self, num: str, den: str, workload: Optional[str] = None) -> float:
        """Mean objective of ``num`` as a percentage of ``den``'s."""
        return 100.0 * self.mean(num, workload) / self.mean(den, workload)

    def hit_rate(self, workload: Optional[str] = None) -> float:
        cells = [c for c in self.cells if workload is None or c.workload == workload]
        return float(np.mean([c.hit for c in cells])) if cells else float("nan")

    @property
    def workloads(self) -> list[str]:
        return sorted({c.workload for c in self.cells})

    def summary(self) -> list[dict]:
        out = []
        for w in self.workloads + [None]:
            out.append({
                "workload": w or "all",
                "cells": sum(1 for c in self.cells if w is None or c.workload == w),
                "S_PS_vs_S_O": self.ratio("S_PS", "S_O", w),
                "S_PS_vs_S_R": self.ratio("S_PS", "S_R", w),
                "S_PS_vs_S_W": self.ratio("S_PS", "S_W", w),
                "S_PS_vs_S_SRF": self.ratio("S_PS", "S_SRF", w),
                "S_SRF_vs_S_O": self.ratio("S_SRF", "S_O", w),
                "optimal_hit_rate": self.hit_rate(w),
            })
        return out

    def to_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "goal": self.goal,
            "summary": self.summary(),
            "cells": [
                {
                    "graph_id": c.graph_id,
                    "workload": c.workload,
                    "chosen": c.chosen,
                    "optimal": c.optimal,
                    "srf": c.srf,
                    "objectives": c.objectives,
                    "per_partitioner": c.per_partitioner,
                }
                for c in self.cells
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StrategyComparison":
        cells = tuple(
            StrategyCell(c["graph_id"], c["workload"], c["chosen"], c["optimal"], c["srf"],
                         dict(c["objectives"]), dict(c["per_partitioner"]))
            for c in d["cells"]
        )
        return cls(d["goal"], cells, int(d.get("seed", 0)))


def true_objective(row, goal: str, unit_ms: float) -> float:
    proc = row.cost_total * unit_ms
    return proc + row.partition_time_ms if goal == "end_to_end" else proc


def _draw(graph_id: str, workload: str, seed: int, n: int) -> int:
    return int(np.random.default_rng(derive_seed("random-baseline", graph_id, workload, seed)).integers(n))


def evaluate_from_rows(
    suite: PredictorSuite,
    runtime_rows,
    props_by_graph: dict,
    goal: str = "end_to_end",
    unit_ms: Optional[float] = None,
    partitioners: Optional[Sequence[str]] = None,
    seed: int = 0,
    random_draw: bool = False,
) -> StrategyComparison:
    """Compare strategies against measured runtime rows (one row per graph, partitioner, workload).

    S_R is the mean over partitioners; with ``random_draw`` it is one seeded
    uniform pick per cell instead.
    """
    goal = normalize_goal(goal)
    unit = suite.cost_model.unit_ms if unit_ms is None else unit_ms
    allowed = set(partitioners) if partitioners is not None else None
    groups: dict = {}
    for r in runtime_rows:
        if allowed is not None and r.partitioner_id not in allowed:
            continue
        groups.setdefault((r.graph_id, r.workload), []).append(r)
    cells = []
    for (gid, w), rows in sorted(groups.items()):
        truth = {r.partitioner_id: true_objective(r, goal, unit) for r in rows}
        rf = {r.partitioner_id: r.rf for r in rows}
        srf = argmin_objective(rf)
        opt = argmin_objective(truth)
        k = rows[0].k
        iters = rows[0].iterations if is_fixed_iteration(w) else None
        rep = select_partitioner(suite, props_by_graph[gid], k, w, goal, iters, partitioners=sorted(truth))
        vals = np.array([truth[p] for p in sorted(truth)])
        objectives = {
            "S_PS": truth[rep.chosen],
            "S_O": truth[opt],
            "S_SRF": truth[srf],
            "S_R": float(vals[_draw(gid, w, seed, len(vals))]) if random_draw else float(vals.mean()),
            "S_W": float(vals.max()),
        }
        cells.append(StrategyCell(gid, w, rep.chosen, opt, srf, objectives, dict(sorted(truth.items()))))
    return StrategyComparison(goal, tuple(cells), seed)


def evaluate_strategies(
    suite: PredictorSuite,
    test_graphs,
    partitioners: Sequence[str],
    workloads: Sequence[str],
    goal: str = "end_to_end",
    cost_model=None,
    seed: int = 0,
    k: Optional[int] = None,
    jobs: int = 1,
    random_draw: bool = False,
) -> StrategyComparison:
    """Run every partitioner and workload on the test graphs, then compare strategies."""
    from ..dataset import build_datasets

    test_graphs = list(test_graphs)
    cm = cost_model or suite.cost_model
    k = suite.runtime_k if k is None else k
    res = build_datasets(test_graphs, partitioners, (), workloads, cm, seed, k, jobs)
    props = {}
    for src in test_graphs:
        props[src.graph_id] = compute_properties(src.load(), FeatureLevel(suite.feature_level))
    return evaluate_from_rows(suite, res.runtime, props, goal, cm.unit_ms, partitioners, seed, random_draw)


# -- rendering -------------------------------------------------------------------

def render_table(cmp: StrategyComparison) -> str:
    """Plain-text table: one row per workload plus the overall row."""
    head = ["workload", "cells", "PS/O %", "PS/R %", "PS/W %", "PS/SRF %", "SRF/O %", "hit %"]
    lines = [f"goal: {cmp.goal}", "  ".join(f"{h:>14}" for h in head)]
    for s in cmp.summary():
        vals = [s["workload"], str(s["cells"])] + [
            f"{s[k]:.1f}" for k in ("S_PS_vs_S_O", "S_PS_vs_S_R", "S_PS_vs_S_W", "S_PS_vs_S_SRF", "S_SRF_vs_S_O")
        ] + [f"{100 * s['optimal_hit_rate']:.1f}"]
        lines.append("  ".join(f"{v:>14}" for v in vals))
    return "\n".join(lines) + "\n"


def render_csv(cmp: StrategyComparison) -> str:
    buf = io.StringIO()
    summary = cmp.summary()
    w = csv.DictWriter(buf, fieldnames=list(summary[0]), lineterminator="\n")
    w.writeheader()
    for s in summary:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in s.items()})
    return buf.getvalue()


def render_cells_csv(cmp: StrategyComparison) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph_id", "workload", "chosen", "optimal", "srf", *STRATEGIES])
    for c in cmp.cells:
        w.writerow([c.graph_id, c.workload, c.chosen, c.optimal, c.srf, *(repr(c.objectives[s]) for s in STRATEGIES)])
    return buf.getvalue()

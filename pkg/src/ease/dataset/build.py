from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from ..graph import FeatureLevel, compute_properties
from ..hashing import derive_seed
from ..partition import DEFAULT_ALPHA, PartitionError, compute_quality, partition
from ..procsim import CostModel, trace_workload, workload_from_name
from .schema import QualityRow, RuntimeRow, SkippedCell

log = logging.getLogger(__name__)

DEFAULT_KS = (4, 8, 16, 32, 64, 128)
DEFAULT_RUNTIME_K = 4


def cell_seed(graph_id: str, partitioner_id: str, k: int, base_seed: int) -> int:
    return derive_seed("cell", graph_id, partitioner_id, k, base_seed)


def workload_seed(graph_id: str, workload: str, base_seed: int) -> int:
    return derive_seed("workload", graph_id, workload, base_seed)


@dataclass
class DatasetResult:
    quality: list = field(default_factory=list)
    runtime: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def extend(self, other: "DatasetResult") -> None:
        self.quality += other.quality
        self.runtime += other.runtime
        self.skipped += other.skipped

    def sort(self) -> "DatasetResult":
        for rows in (self.quality, self.runtime, self.skipped):
            rows.sort(key=lambda r: r.sort_key())
        return self


@dataclass(frozen=True)
class _Job:
    source: object
    partitioners: tuple
    ks: tuple
    workloads: tuple
    runtime_k: Optional[int]
    cost_model: CostModel
    seed: int
    timing: str
    alpha: float


def _partition_ms(p, elapsed: float, timing: str) -> float:
    return elapsed * 1e3 if timing == "wall" else p.modeled_ms


def _run_graph(job: _Job) -> DatasetResult:
    src = job.source
    gid = src.graph_id
    g = src.load()
    props = compute_properties(g, FeatureLevel.ADVANCED)
    out = DatasetResult()
    quality_ks = set(job.ks)
    ks = sorted(quality_ks | ({job.runtime_k} if job.runtime_k and job.workloads else set()))
    traces = {}
    for k in ks:
        for pid in job.partitioners:
            seed = cell_seed(gid, pid, k, job.seed)
            try:
                p, elapsed = partition(g, pid, k, seed=seed, alpha=job.alpha)
            except PartitionError as exc:
                log.warning("skip %s %s k=%d: %s", gid, pid, k, exc)
                out.skipped.append(SkippedCell(gid, pid, k, str(exc)))
                continue
            q = compute_quality(g, p)
            ms = _partition_ms(p, elapsed, job.timing)
            log.debug("%s %s k=%d rf=%.3f wall=%.1fms", gid, pid, k, q.rf, elapsed * 1e3)
            if k in quality_ks:
                out.quality.append(
                    QualityRow(
                        graph_id=gid, graph_type=src.graph_type,
                        num_vertices=props.num_vertices, num_edges=props.num_edges,
                        mean_degree=props.mean_degree, density=props.density,
                        indeg_skew=props.indeg_skew, outdeg_skew=props.outdeg_skew,
                        avg_triangles=props.avg_triangles, avg_lcc=props.avg_lcc,
                        partitioner_id=pid, k=k, seed=seed,
                        rf=q.rf, b_edge=q.b_edge, b_v=q.b_v, b_src=q.b_src, b_dst=q.b_dst,
                        partition_time_ms=ms,
                    )
                )
            if k != job.runtime_k:
                continue
            for name in job.workloads:
                if name not in traces:
                    w = workload_from_name(name, seed=workload_seed(gid, name, job.seed))
                    traces[name] = trace_workload(g, w)
                tr = traces[name]
                res = tr.cost(g, p, job.cost_model)
                out.runtime.append(
                    RuntimeRow(
                        graph_id=gid, graph_type=src.graph_type,
                        num_vertices=props.num_vertices, num_edges=props.num_edges,
                        partitioner_id=pid, k=k, seed=seed,
                        workload=name, iterations=tr.workload.iterations,
                        rf=q.rf, b_edge=q.b_edge, b_v=q.b_v, b_src=q.b_src, b_dst=q.b_dst,
                        target=res.target,
                        target_kind="cost_per_iteration" if res.cost_per_iteration is not None else "cost_total",
                        cost_total=res.cost_total,
                        partition_time_ms=ms,
                    )
                )
    log.info("dataset cells done for %s", gid)
    return out


def build_datasets(
    suite: Iterable,
    partitioners: Sequence[str],
    ks: Sequence[int] = DEFAULT_KS,
    workloads: Sequence[str] = (),
    cost_model: Optional[CostModel] = None,
    seed: int = 0,
    runtime_k: Optional[int] = DEFAULT_RUNTIME_K,
    jobs: int = 1,
    timing: str = "model",
    alpha: float = DEFAULT_ALPHA,
) -> DatasetResult:
    """Partition every graph with every partitioner and simulate every workload.

    Quality rows cover ``ks``; runtime rows use ``runtime_k`` only. Rows come back
    sorted, so the worker count never changes the output.
    """
    if timing not in ("model", "wall"):
        raise ValueError("timing must be 'model' or 'wall'")
    suite = list(suite)
    if not suite or not partitioners:
        raise ValueError("suite and partitioner list must be nonempty")
    for name in workloads:
        workload_from_name(name)
    cm = cost_model or CostModel()
    job_list = [
        _Job(s, tuple(partitioners), tuple(ks), tuple(workloads), runtime_k, cm, seed, timing, alpha)
        for s in suite
    ]
    result = DatasetResult()
    if jobs <= 1 or len(job_list) == 1:
        for j in job_list:
            result.extend(_run_graph(j))
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(job_list))) as ex:
            for part in ex.map(_run_graph, job_list):
                result.extend(part)
    return result.sort()


def build_quality_dataset(suite, partitioners, ks=DEFAULT_KS, seed=0, jobs=1, timing="model", alpha=DEFAULT_ALPHA):
    r = build_datasets(suite, partitioners, ks, (), None, seed, None, jobs, timing, alpha)
    return r.quality, r.skipped


def build_runtime_dataset(
    suite, partitioners, workloads, cost_model=None, seed=0, k=DEFAULT_RUNTIME_K, jobs=1, timing="model",
    alpha=DEFAULT_ALPHA,
):
    r = build_datasets(suite, partitioners, (), workloads, cost_model, seed, k, jobs, timing, alpha)
    return r.runtime, r.skipped


def default_jobs() -> int:
    return os.cpu_count() or 1


def split_graphs(graph_ids, fraction: float, seed: int) -> tuple[list[str], list[str]]:
    """Deterministic (train, held-out) split of graph ids; at least one graph is held out
    when ``fraction`` > 0 and more than one graph exists."""
    ids = sorted(set(graph_ids))
    if not 0 <= fraction < 1:
        raise ValueError("fraction must be in [0, 1)")
    n_out = int(round(fraction * len(ids)))
    if fraction > 0 and len(ids) > 1:
        n_out = max(1, n_out)
    perm = np.random.default_rng(derive_seed("holdout", seed)).permutation(len(ids))
    held = sorted(ids[i] for i in perm[:n_out])
    hs = set(held)
    return [i for i in ids if i not in hs], held

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

ALGORITHMS = ("pagerank", "cc", "sssp", "kcores", "label_propagation", "synthetic")
# algorithms run for a fixed number of supersteps; the rest run to a fixpoint
FIXED_ITERATION = frozenset({"pagerank", "label_propagation", "synthetic"})
# algorithms that push along out-edges only
DIRECTED = frozenset({"pagerank", "sssp", "synthetic"})


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class WorkloadSpec:
    algorithm: str
    iterations: int = 0
    s: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise SimulationError(
                f"unknown algorithm {self.algorithm!r}; known: {', '.join(ALGORITHMS)}"
            )
        if self.iterations < 0:
            raise SimulationError("iterations must be >= 0")
        if self.algorithm in FIXED_ITERATION and self.iterations < 1:
            raise SimulationError(f"{self.algorithm} needs iterations >= 1")
        if self.s < 1:
            raise SimulationError("s must be >= 1")
        if self.s != 1 and self.algorithm != "synthetic":
            raise SimulationError("s only applies to the synthetic workload")

    @property
    def fixed_iterations(self) -> bool:
        return self.algorithm in FIXED_ITERATION

    @property
    def directed(self) -> bool:
        return self.algorithm in DIRECTED

    @property
    def name(self) -> str:
        if self.algorithm == "synthetic":
            return {1: "synthetic-low", 10: "synthetic-high"}.get(self.s, f"synthetic-s{self.s}")
        return self.algorithm

    def with_seed(self, seed: int) -> "WorkloadSpec":
        return WorkloadSpec(self.algorithm, self.iterations, self.s, seed)


STANDARD_WORKLOADS: dict[str, WorkloadSpec] = {
    "pagerank": WorkloadSpec("pagerank", iterations=10),
    "cc": WorkloadSpec("cc"),
    "sssp": WorkloadSpec("sssp"),
    "kcores": WorkloadSpec("kcores"),
    "synthetic-low": WorkloadSpec("synthetic", iterations=5, s=1),
    "synthetic-high": WorkloadSpec("synthetic", iterations=5, s=10),
    "label_propagation": WorkloadSpec("label_propagation", iterations=10),
}
DEFAULT_WORKLOADS = ("pagerank", "cc", "sssp", "kcores", "synthetic-low", "synthetic-high")


def workload_from_name(name: str, iterations: Optional[int] = None, seed: int = 0) -> WorkloadSpec:
    """Look up a named workload; ``iterations`` overrides the default count."""
    if name not in STANDARD_WORKLOADS:
        raise SimulationError(f"unknown workload {name!r}; known: {', '.join(STANDARD_WORKLOADS)}")
    w = STANDARD_WORKLOADS[name]
    return WorkloadSpec(w.algorithm, w.iterations if iterations is None else iterations, w.s, seed)


@dataclass(frozen=True)
class CostModel:
    alpha_e: float = 1.0
    alpha_v: float = 0.1
    # cost of one 8-unit message
    beta: float = 0.05
    # milliseconds per cost unit, used where processing and partitioning time are added
    unit_ms: float = 1e-3

    def __post_init__(self):
        for name in ("alpha_e", "alpha_v", "beta", "unit_ms"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise SimulationError(f"cost model {name} must be > 0, got {v}")

    @staticmethod
    def msg_size(w: WorkloadSpec) -> int:
        return 8 * w.s if w.algorithm == "synthetic" else 8

    def to_ms(self, cost: float) -> float:
        return cost * self.unit_ms

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CostModel":
        unknown = set(d) - {"alpha_e", "alpha_v", "beta", "unit_ms"}
        if unknown:
            raise SimulationError(f"unknown cost model keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})

    @classmethod
    def load(cls, path) -> "CostModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class ProcessingResult:
    workload: str
    cost_total: float
    cost_per_iteration: Optional[float]
    iterations_executed: int
    compute_cost: float
    comm_cost: float
    output_digest: str
    wall_ms: float = 0.0
    superstep_costs: tuple = field(default=(), repr=False)
    active_vertices: tuple = field(default=(), repr=False)

    @property
    def target(self) -> float:
        """The dataset target: per-iteration cost for fixed-iteration workloads, total otherwise."""
        return self.cost_per_iteration if self.cost_per_iteration is not None else self.cost_total

    def to_dict(self) -> dict:
        d = asdict(self)
        d["superstep_costs"] = list(self.superstep_costs)
        d["active_vertices"] = list(self.active_vertices)
        return d


def assemble_result(w, cm, counts, active_vertices, digest, wall_ms) -> ProcessingResult:
    """Fold per-superstep worker counts into costs.

    ``counts`` holds one (edges, vertices, units) triple of length-k int arrays per
    superstep. Both execution routes go through here so their floats agree bit for bit.
    """
    beta_unit = cm.beta / 8.0
    compute = comm = total = 0.0
    steps = []
    for ae, av, units in counts:
        c = float(np.max(cm.alpha_e * ae + cm.alpha_v * av)) if ae.size else 0.0
        x = beta_unit * float(np.max(units)) if units.size else 0.0
        compute += c
        comm += x
        total += c + x
        steps.append(c + x)
    n = len(counts)
    per_iter = total / n if (w.fixed_iterations and n) else None
    return ProcessingResult(
        workload=w.name,
        cost_total=total,
        cost_per_iteration=per_iter,
        iterations_executed=n,
        compute_cost=compute,
        comm_cost=comm,
        output_digest=digest,
        wall_ms=wall_ms,
        superstep_costs=tuple(steps),
        active_vertices=tuple(int(a) for a in active_vertices),
    )

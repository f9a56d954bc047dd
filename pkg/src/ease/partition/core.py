from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..graph import Graph
from ..hashing import bucket, mix64, pair_hash
from . import kernels

DEFAULT_ALPHA = 1.05
# deterministic partitioning-time model: milliseconds per counted kernel step
MS_PER_OP = 1e-5


class PartitionError(ValueError):
    pass


class CapacityError(PartitionError):
    pass


@dataclass(frozen=True, eq=False)
class Partitioning:
    k: int
    assignment: np.ndarray = field(repr=False)
    alpha: float
    partitioner_id: str
    seed: int
    ops: int = 0

    @property
    def modeled_ms(self) -> float:
        return self.ops * MS_PER_OP

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def capacity(self, num_edges: int) -> float:
        return self.alpha * num_edges / self.k


def grid_shape(k: int) -> tuple[int, int]:
    """rows x cols = k with rows the largest divisor of k not above sqrt(k)."""
    rows = math.isqrt(k)
    while k % rows:
        rows -= 1
    return rows, k // rows


def _capacity(m: int, k: int, alpha: float) -> int:
    cap = math.floor(alpha * m / k + 1e-9)
    if cap < 1 or cap * k < m:
        raise CapacityError(f"alpha={alpha} leaves room for {cap}*{k} < {m} edges")
    return cap


# -- stateless streaming -------------------------------------------------------

def _one_d_src(g, k, seed, alpha):
    return bucket(mix64(g.src, seed), k), g.num_edges


def _one_d_dst(g, k, seed, alpha):
    return bucket(mix64(g.dst, seed), k), g.num_edges


def _crvc(g, k, seed, alpha):
    lo = np.minimum(g.src, g.dst)
    hi = np.maximum(g.src, g.dst)
    return bucket(pair_hash(lo, hi, seed), k), 2 * g.num_edges


def _grid(g, k, seed, alpha):
    rows, cols = grid_shape(k)
    r = bucket(mix64(g.src, seed), rows)
    c = bucket(mix64(g.dst, seed), cols)
    return r * cols + c, 2 * g.num_edges


def _dbh(g, k, seed, alpha):
    deg = g.degrees()
    du, dv = deg[g.src], deg[g.dst]
    pick_src = (du < dv) | ((du == dv) & (g.src <= g.dst))
    chosen = np.where(pick_src, g.src, g.dst)
    return bucket(mix64(chosen, seed), k), 3 * g.num_edges


# -- stateful ------------------------------------------------------------------

def _hdrf(lam: float):
    def run(g, k, seed, alpha):
        cap = _capacity(g.num_edges, k, alpha)
        return kernels.hdrf(g.num_vertices, g.src, g.dst, k, lam, cap)

    return run


def _two_ps(g, k, seed, alpha):
    cap = _capacity(g.num_edges, k, alpha)
    return kernels.two_phase(g.num_vertices, g.src, g.dst, k, cap, 1.0)


def _ne(g, k, seed, alpha):
    cap = _capacity(g.num_edges, k, alpha)
    perm = np.random.default_rng(seed).permutation(g.num_vertices)
    return kernels.neighborhood_expansion(g.num_vertices, g.src, g.dst, k, cap, perm)


PARTITIONERS: dict[str, Callable] = {
    "1dd": _one_d_dst,
    "1ds": _one_d_src,
    "2d": _grid,
    "2ps": _two_ps,
    "crvc": _crvc,
    "dbh": _dbh,
    "hdrf-1.0": _hdrf(1.0),
    "hdrf-10": _hdrf(10.0),
    "hdrf-100": _hdrf(100.0),
    "ne": _ne,
}

# partitioners whose edge loads respect alpha * |E| / k
CAPACITY_ENFORCED = frozenset({"hdrf-1.0", "hdrf-10", "hdrf-100", "2ps", "ne"})


def registered_partitioners() -> list[str]:
    return sorted(PARTITIONERS)


def partition(
    g: Graph, partitioner_id: str, k: int, seed: int = 0, alpha: float = DEFAULT_ALPHA
) -> tuple[Partitioning, float]:
    """Run one partitioner; returns the partitioning and wall-clock seconds of the call."""
    try:
        fn = PARTITIONERS[partitioner_id]
    except KeyError:
        raise PartitionError(
            f"unknown partitioner {partitioner_id!r}; known: {', '.join(registered_partitioners())}"
        ) from None
    g.require_edges()
    if k < 1:
        raise PartitionError("k must be >= 1")
    if k > g.num_edges:
        raise PartitionError(f"k={k} exceeds the number of edges ({g.num_edges})")
    if alpha < 1:
        raise PartitionError("alpha must be >= 1")
    if alpha * g.num_edges / k < 1:
        raise CapacityError(f"alpha*|E|/k = {alpha * g.num_edges / k:.3g} < 1")
    start = time.perf_counter()
    assignment, ops = fn(g, k, seed, alpha)
    elapsed = time.perf_counter() - start
    assignment = np.ascontiguousarray(assignment, dtype=np.int64)
    assignment.flags.writeable = False
    return Partitioning(k, assignment, alpha, partitioner_id, seed, int(ops)), elapsed

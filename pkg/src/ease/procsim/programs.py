"""Definitions shared by both execution routes: initial states, constants, digests."""

from __future__ import annotations

import hashlib

import numpy as np

from ..hashing import derive_seed
from .workload import SimulationError

DAMPING = 0.85
# PageRank contributions are summed as fixed-point integers so the total does not
# depend on how edges are split across workers
PR_SCALE = float(2**50)
PR_INV = 1.0 / PR_SCALE
INF = np.int64(1) << np.int64(62)
SYN_MOD = np.int64(2**31 - 1)


def sssp_source(g, seed: int) -> int:
    cand = np.flatnonzero(g.out_degrees() > 0)
    if cand.size == 0:
        raise SimulationError("sssp needs at least one vertex with an out-edge")
    rng = np.random.default_rng(derive_seed("sssp-source", seed))
    return int(cand[rng.integers(cand.size)])


def kcore_threshold(g) -> int:
    n = g.num_vertices
    return int(-(-2 * g.num_edges // n)) if n else 0


def pagerank_contrib(rank: np.ndarray, outdeg: np.ndarray) -> np.ndarray:
    return (rank * PR_SCALE).astype(np.int64) // outdeg


def synthetic_init(n: int, s: int) -> np.ndarray:
    v = np.arange(n, dtype=np.int64)[:, None]
    j = np.arange(s, dtype=np.int64)[None, :]
    return (v * 1000003 + j * 7919 + 1) % SYN_MOD


def initial_state(g, w) -> dict:
    """Global vertex state before superstep 0, keyed by field name."""
    n = g.num_vertices
    ids = np.arange(n, dtype=np.int64)
    a = w.algorithm
    if a == "pagerank":
        return {"rank": np.full(n, 1.0 / n) if n else np.zeros(0)}
    if a in ("cc", "label_propagation"):
        return {"label": ids.copy()}
    if a == "sssp":
        d = np.full(n, INF, np.int64)
        d[sssp_source(g, w.seed)] = 0
        return {"dist": d}
    if a == "kcores":
        return {"alive": np.ones(n, np.int8), "count": np.zeros(n, np.int64)}
    if a == "synthetic":
        return {"x": synthetic_init(n, w.s)}
    raise SimulationError(f"unknown algorithm {a!r}")


def initial_senders(g, w, state) -> np.ndarray:
    if w.algorithm == "sssp":
        return np.flatnonzero(state["dist"] == 0)
    return np.arange(g.num_vertices, dtype=np.int64)


OUTPUT_FIELD = {
    "pagerank": "rank",
    "cc": "label",
    "label_propagation": "label",
    "sssp": "dist",
    "kcores": "alive",
    "synthetic": "x",
}


def output_digest(algorithm: str, state: dict) -> str:
    arr = np.ascontiguousarray(state[OUTPUT_FIELD[algorithm]])
    h = hashlib.blake2b(digest_size=16)
    h.update(algorithm.encode())
    h.update(arr.dtype.str.encode())
    h.update(str(arr.shape).encode())
    h.update(arr.astype(arr.dtype.newbyteorder("<"), copy=False).tobytes())
    return h.hexdigest()

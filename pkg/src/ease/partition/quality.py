from __future__ import annotations

from dataclasses import asdict, dataclass

import numba
import numpy as np

from ..graph import Graph


@dataclass(frozen=True)
class QualityMetrics:
    rf: float
    b_edge: float
    b_v: float
    b_src: float
    b_dst: float

    FIELDS = ("rf", "b_edge", "b_v", "b_src", "b_dst")

    def to_dict(self) -> dict:
        return asdict(self)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.rf, self.b_edge, self.b_v, self.b_src, self.b_dst)


@numba.njit(cache=True)
def _cover_counts(n, k, src, dst, part):
    words = (k + 63) // 64
    cov = np.zeros((n, words), np.uint64)
    cov_src = np.zeros((n, words), np.uint64)
    cov_dst = np.zeros((n, words), np.uint64)
    edges = np.zeros(k, np.int64)
    verts = np.zeros(k, np.int64)
    srcs = np.zeros(k, np.int64)
    dsts = np.zeros(k, np.int64)
    for i in range(src.size):
        p = part[i]
        w = p >> 6
        bit = np.uint64(1) << np.uint64(p & 63)
        u, v = src[i], dst[i]
        edges[p] += 1
        if cov_src[u, w] & bit == 0:
            cov_src[u, w] |= bit
            srcs[p] += 1
        if cov_dst[v, w] & bit == 0:
            cov_dst[v, w] |= bit
            dsts[p] += 1
        if cov[u, w] & bit == 0:
            cov[u, w] |= bit
            verts[p] += 1
        if cov[v, w] & bit == 0:
            cov[v, w] |= bit
            verts[p] += 1
    return edges, verts, srcs, dsts


def cover_sizes(g: Graph, k: int, assignment: np.ndarray) -> dict[str, np.ndarray]:
    """Per-partition |p_i|, |V(p_i)|, |V_src(p_i)|, |V_dst(p_i)|."""
    e, v, s, d = _cover_counts(g.num_vertices, k, g.src, g.dst, np.asarray(assignment, np.int64))
    return {"edges": e, "vertices": v, "src": s, "dst": d}


def _balance(sizes: np.ndarray) -> float:
    avg = sizes.mean()
    return float(sizes.max() / avg) if avg > 0 else 1.0


def quality_from_assignment(g: Graph, k: int, assignment: np.ndarray) -> QualityMetrics:
    c = cover_sizes(g, k, assignment)
    return QualityMetrics(
        rf=float(c["vertices"].sum()) / g.num_vertices,
        b_edge=_balance(c["edges"]),
        b_v=_balance(c["vertices"]),
        b_src=_balance(c["src"]),
        b_dst=_balance(c["dst"]),
    )


def compute_quality(g: Graph, p) -> QualityMetrics:
    """Replication factor and the four max/avg balance ratios of a partitioning.

    Isolated vertices count in |V| but cover no partition, so they pull rf below
    what the covered vertices alone would give.
    """
    return quality_from_assignment(g, p.k, p.assignment)

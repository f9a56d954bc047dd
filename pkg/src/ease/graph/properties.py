from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

import numba
import numpy as np

from .core import Graph


class FeatureLevel(str, Enum):
    SIMPLE = "simple"
    BASIC = "basic"
    ADVANCED = "advanced"

    @property
    def rank(self) -> int:
        return ("simple", "basic", "advanced").index(self.value)


@dataclass(frozen=True)
class GraphProperties:
    num_edges: int
    num_vertices: int
    level: FeatureLevel = FeatureLevel.SIMPLE
    mean_degree: float | None = None
    density: float | None = None
    indeg_skew: float | None = None
    outdeg_skew: float | None = None
    avg_triangles: float | None = None
    avg_lcc: float | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["level"] = self.level.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GraphProperties":
        d = dict(d)
        d["level"] = FeatureLevel(d.get("level", "simple"))
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in d.items() if k in fields})


def pearson_skew(values: np.ndarray) -> float:
    """(mean - mode) / std over non-negative integers; the mode is the smallest
    most-frequent value and a zero std gives 0."""
    values = np.asarray(values)
    sigma = float(values.std())
    if sigma == 0.0:
        return 0.0
    mode = int(np.argmax(np.bincount(values)))
    return (float(values.mean()) - mode) / sigma


def simple_undirected_edges(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrized edge set without self-loops or duplicates, as (lo, hi) pairs."""
    lo = np.minimum(g.src, g.dst)
    hi = np.maximum(g.src, g.dst)
    keep = lo != hi
    key = np.unique(lo[keep] * g.num_vertices + hi[keep])
    return key // g.num_vertices, key % g.num_vertices


@numba.njit(cache=True)
def _triangles_per_vertex(n, lo, hi):
    deg = np.zeros(n, np.int64)
    for i in range(lo.size):
        deg[lo[i]] += 1
        deg[hi[i]] += 1
    # orient every edge from lower to higher (degree, id) rank
    outdeg = np.zeros(n + 1, np.int64)
    a = np.empty(lo.size, np.int64)
    b = np.empty(lo.size, np.int64)
    for i in range(lo.size):
        u, v = lo[i], hi[i]
        if deg[u] > deg[v] or (deg[u] == deg[v] and u > v):
            u, v = v, u
        a[i] = u
        b[i] = v
        outdeg[u + 1] += 1
    ptr = np.cumsum(outdeg)
    fill = ptr[:-1].copy()
    adj = np.empty(lo.size, np.int64)
    for i in range(lo.size):
        adj[fill[a[i]]] = b[i]
        fill[a[i]] += 1
    tri = np.zeros(n, np.int64)
    mark = np.full(n, -1, np.int64)
    for u in range(n):
        for p in range(ptr[u], ptr[u + 1]):
            mark[adj[p]] = u
        for p in range(ptr[u], ptr[u + 1]):
            v = adj[p]
            for q in range(ptr[v], ptr[v + 1]):
                w = adj[q]
                if mark[w] == u:
                    tri[u] += 1
                    tri[v] += 1
                    tri[w] += 1
    return tri, deg


def triangles_per_vertex(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex triangle counts and simple undirected degrees."""
    lo, hi = simple_undirected_edges(g)
    return _triangles_per_vertex(g.num_vertices, lo, hi)


def compute_properties(g: Graph, level: FeatureLevel | str = FeatureLevel.ADVANCED) -> GraphProperties:
    g.require_edges()
    level = FeatureLevel(level)
    n, m = g.num_vertices, g.num_edges
    if level is FeatureLevel.SIMPLE:
        return GraphProperties(m, n, level)

    basic = dict(
        mean_degree=2.0 * m / n,
        density=m / (n * (n - 1)) if n > 1 else 1.0,
        indeg_skew=pearson_skew(g.in_degrees()),
        outdeg_skew=pearson_skew(g.out_degrees()),
    )
    if level is FeatureLevel.BASIC:
        return GraphProperties(m, n, level, **basic)

    tri, deg = triangles_per_vertex(g)
    pairs = 0.5 * deg * (deg - 1)
    lcc = np.divide(tri, pairs, out=np.zeros(n), where=deg >= 2)
    return GraphProperties(
        m, n, level, **basic,
        avg_triangles=float(tri.sum()) / n,
        avg_lcc=float(lcc.sum()) / n,
    )

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Graph:
    """Directed edge list over dense vertex ids ``[0, num_vertices)``.

    Edge order is significant: streaming partitioners consume edges in this order.
    ``original_ids`` maps dense id -> id as read from a file (None for generated graphs).
    """

    num_vertices: int
    src: np.ndarray
    dst: np.ndarray
    original_ids: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        src = np.ascontiguousarray(self.src, dtype=np.int64)
        dst = np.ascontiguousarray(self.dst, dtype=np.int64)
        if src.shape != dst.shape or src.ndim != 1:
            raise ValueError("src and dst must be 1-d arrays of equal length")
        if self.num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= self.num_vertices):
            raise ValueError("vertex id out of range [0, num_vertices)")
        src.flags.writeable = False
        dst.flags.writeable = False
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)

    @property
    def num_edges(self) -> int:
        return int(self.src.size)

    @classmethod
    def from_edges(cls, edges, num_vertices: int | None = None) -> "Graph":
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if num_vertices is None:
            num_vertices = int(arr.max()) + 1 if arr.size else 1
        return cls(num_vertices, arr[:, 0], arr[:, 1])

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self.dst, minlength=self.num_vertices)

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.num_vertices)

    def degrees(self) -> np.ndarray:
        """Total (in + out) degree; a self-loop counts twice."""
        return self.in_degrees() + self.out_degrees()

    def with_isolated(self, extra: int) -> "Graph":
        return Graph(self.num_vertices + extra, self.src, self.dst)

    def require_edges(self) -> None:
        if self.num_edges < 1:
            raise ValueError("operation needs a graph with at least one edge")

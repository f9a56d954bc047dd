from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from ..hashing import mix64

MASTER_SEED = 0x6D61737465720001


def master_slot(vertices: np.ndarray, replica_counts: np.ndarray) -> np.ndarray:
    """Index of the master among a vertex's replica workers (sorted ascending)."""
    r = np.maximum(np.asarray(replica_counts, np.int64), 1).astype(np.uint64)
    return (mix64(np.asarray(vertices, np.int64), MASTER_SEED) % r).astype(np.int64)


@numba.njit(cache=True)
def _replica_lists(n, k, src, dst, part):
    words = (k + 63) // 64
    cov = np.zeros((n, words), np.uint64)
    for i in range(src.size):
        p = part[i]
        bit = np.uint64(1) << np.uint64(p & 63)
        cov[src[i], p >> 6] |= bit
        cov[dst[i], p >> 6] |= bit
    ptr = np.zeros(n + 1, np.int64)
    for v in range(n):
        c = 0
        for w in range(words):
            x = cov[v, w]
            while x:
                x &= x - np.uint64(1)
                c += 1
        ptr[v + 1] = ptr[v] + c
    workers = np.empty(ptr[n], np.int64)
    for v in range(n):
        j = ptr[v]
        for w in range(words):
            x = cov[v, w]
            b = 0
            while x:
                if x & np.uint64(1):
                    workers[j] = w * 64 + b
                    j += 1
                x >>= np.uint64(1)
                b += 1
    return ptr, workers


@dataclass(frozen=True, eq=False)
class ReplicaTable:
    """Workers holding each vertex (CSR, ascending) and the flat index of its master."""

    k: int
    ptr: np.ndarray
    workers: np.ndarray
    master: np.ndarray

    @property
    def counts(self) -> np.ndarray:
        return np.diff(self.ptr)

    def master_worker(self) -> np.ndarray:
        out = np.full(self.ptr.size - 1, -1, np.int64)
        has = self.counts > 0
        out[has] = self.workers[self.master[has]]
        return out


def replica_table(g, p) -> ReplicaTable:
    ptr, workers = _replica_lists(g.num_vertices, p.k, g.src, g.dst, p.assignment)
    r = np.diff(ptr)
    master = ptr[:-1] + master_slot(np.arange(g.num_vertices), r)
    master[r == 0] = -1
    return ReplicaTable(p.k, ptr, workers, master)


def replication_message_volume(g, p, active, msg_size: int) -> int:
    """Gather plus broadcast units for one superstep: sum of 2*(replicas-1)*msg_size."""
    r = np.diff(replica_table(g, p).ptr)
    act = np.asarray(active)
    if act.dtype == bool:
        act = np.flatnonzero(act)
    extra = np.maximum(r[act] - 1, 0)
    return int(extra.sum()) * 2 * int(msg_size)

"""Sequential route: run a workload once per graph, then price any partitioning.

The trace records, per superstep, the vertices that push along their edges (F) and
the active set A = F plus every vertex that received something. The cost of a
partitioning follows from F, A and the replica table alone, so a dataset build
runs each algorithm once per graph instead of once per partitioning.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numba
import numpy as np

from .programs import (
    DAMPING,
    INF,
    PR_INV,
    PR_SCALE,
    SYN_MOD,
    initial_senders,
    initial_state,
    kcore_threshold,
    output_digest,
)
from .replicas import replica_table
from .workload import CostModel, ProcessingResult, SimulationError, WorkloadSpec, assemble_result


def adjacency(g, directed: bool):
    """CSR (ptr, neighbour, edge id). Directed: out-edges. Undirected: each edge at
    both endpoints, self-loops once."""
    n, m = g.num_vertices, g.num_edges
    if directed:
        keys, nbr, eid = g.src, g.dst, np.arange(m, dtype=np.int64)
    else:
        nl = np.flatnonzero(g.src != g.dst)
        keys = np.concatenate([g.src, g.dst[nl]])
        nbr = np.concatenate([g.dst, g.src[nl]])
        eid = np.concatenate([np.arange(m, dtype=np.int64), nl])
    order = np.argsort(keys, kind="stable")
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=ptr[1:])
    return ptr, nbr[order], eid[order]


# -- per-algorithm push kernels --------------------------------------------------

@numba.njit(cache=True)
def _pr_push(rank, outdeg, ptr, nbr):
    n = rank.size
    acc = np.zeros(n, np.int64)
    for u in range(n):
        if outdeg[u] == 0:
            continue
        c = np.int64(rank[u] * PR_SCALE) // outdeg[u]
        for j in range(ptr[u], ptr[u + 1]):
            acc[nbr[j]] += c
    return acc


@numba.njit(cache=True)
def _min_push(senders, ptr, nbr, val, plus, n):
    cand = np.full(n, INF, np.int64)
    rec = np.zeros(n, np.bool_)
    for u in senders:
        x = val[u] + plus
        for j in range(ptr[u], ptr[u + 1]):
            v = nbr[j]
            rec[v] = True
            if x < cand[v]:
                cand[v] = x
    return cand, rec


@numba.njit(cache=True)
def _kcore_push(senders, ptr, nbr, alive, n):
    acc = np.zeros(n, np.int64)
    rec = np.zeros(n, np.bool_)
    for u in senders:
        x = 1 if alive[u] else -1
        for j in range(ptr[u], ptr[u + 1]):
            v = nbr[j]
            rec[v] = True
            if v != u:
                acc[v] += x
    return acc, rec


@numba.njit(cache=True)
def _lp_push(ptr, nbr, label):
    # every vertex sends; returns the most frequent incoming label, ties to smallest
    n = label.size
    keys = np.empty(ptr[n], np.int64)
    for u in range(n):
        for j in range(ptr[u], ptr[u + 1]):
            keys[j] = nbr[j] * n + label[u]
    keys.sort()
    out = label.copy()
    rec = np.zeros(n, np.bool_)
    i = 0
    best_v = -1
    best_c = 0
    while i < keys.size:
        j = i
        while j < keys.size and keys[j] == keys[i]:
            j += 1
        v = keys[i] // n
        lab = keys[i] - v * n
        c = j - i
        if v != best_v:
            best_v = v
            best_c = 0
        if c > best_c:
            best_c = c
            out[v] = lab
        rec[v] = True
        i = j
    return out, rec


@numba.njit(cache=True)
def _sum_push(x, ptr, nbr):
    n, s = x.shape
    acc = np.zeros((n, s), np.int64)
    rec = np.zeros(n, np.bool_)
    for u in range(n):
        for j in range(ptr[u], ptr[u + 1]):
            v = nbr[j]
            rec[v] = True
            for c in range(s):
                acc[v, c] += x[u, c]
    return acc, rec


# -- trace ---------------------------------------------------------------------------

@dataclass(eq=False)
class WorkloadTrace:
    workload: WorkloadSpec
    num_vertices: int
    directed: bool
    src: np.ndarray = field(repr=False)
    dst: np.ndarray = field(repr=False)
    # (senders, active) index arrays per superstep; repeated steps share objects
    steps: list = field(repr=False)
    output_digest: str = ""
    state: dict = field(default_factory=dict, repr=False)
    _counted: dict = field(default_factory=dict, repr=False)

    def cost(self, g, p, cm: CostModel | None = None) -> ProcessingResult:
        return trace_cost(self, g, p, cm)

    def counted(self, senders: np.ndarray) -> np.ndarray:
        # keyed by identity; the entry keeps ``senders`` alive so the id stays unique
        key = id(senders)
        if key not in self._counted:
            self._counted[key] = (senders, _counted_edges(self, senders))
        return self._counted[key][1]


def _union(a: np.ndarray, mask: np.ndarray) -> np.ndarray:
    m = mask.copy()
    m[a] = True
    return np.flatnonzero(m)


def trace_workload(g, w: WorkloadSpec) -> WorkloadTrace:
    n = g.num_vertices
    ptr, nbr, eid = adjacency(g, w.directed)
    state = initial_state(g, w)
    senders = initial_senders(g, w, state)
    a = w.algorithm
    steps = []
    if w.fixed_iterations:
        everyone = np.arange(n, dtype=np.int64)
        step = (everyone, everyone)
        outdeg = g.out_degrees()
        for _ in range(w.iterations):
            if a == "pagerank":
                acc = _pr_push(state["rank"], outdeg, ptr, nbr)
                state["rank"] = (1.0 - DAMPING) / n + DAMPING * (acc.astype(np.float64) * PR_INV)
            elif a == "label_propagation":
                state["label"], _ = _lp_push(ptr, nbr, state["label"])
            else:
                acc, _ = _sum_push(state["x"], ptr, nbr)
                state["x"] = (state["x"] + acc % SYN_MOD) % SYN_MOD
            steps.append(step)
    else:
        kc = kcore_threshold(g)
        while senders.size and (w.iterations == 0 or len(steps) < w.iterations):
            if a == "cc":
                cand, rec = _min_push(senders, ptr, nbr, state["label"], 0, n)
                active = _union(senders, rec)
                old = state["label"][active]
                new = np.minimum(old, cand[active])
                state["label"][active] = new
                nxt = active[new < old]
            elif a == "sssp":
                cand, rec = _min_push(senders, ptr, nbr, state["dist"], 1, n)
                active = _union(senders, rec)
                old = state["dist"][active]
                new = np.minimum(old, cand[active])
                state["dist"][active] = new
                nxt = active[new < old]
            elif a == "kcores":
                acc, rec = _kcore_push(senders, ptr, nbr, state["alive"], n)
                active = _union(senders, rec)
                state["count"][active] += acc[active]
                dying = (state["alive"][active] == 1) & (state["count"][active] < kc)
                nxt = active[dying]
                state["alive"][nxt] = 0
            else:
                raise SimulationError(f"unknown algorithm {a!r}")
            steps.append((senders, active))
            senders = nxt
    return WorkloadTrace(
        workload=w,
        num_vertices=n,
        directed=w.directed,
        src=g.src,
        dst=g.dst,
        steps=steps,
        output_digest=output_digest(a, state),
        state=state,
    )


def _counted_edges(trace, senders: np.ndarray) -> np.ndarray:
    """Edge ids processed in a superstep, ascending. They depend only on the graph and
    the senders, so one array serves every partitioning. An undirected edge with
    both ends sending is processed once."""
    fmask = np.zeros(trace.num_vertices, np.bool_)
    fmask[senders] = True
    hit = fmask[trace.src] if trace.directed else fmask[trace.src] | fmask[trace.dst]
    return np.flatnonzero(hit)


@numba.njit(cache=True)
def _replica_counts(active, rptr, rworkers, rmaster, k, msg):
    av = np.zeros(k, np.int64)
    units = np.zeros(k, np.int64)
    for v in active:
        lo, hi = rptr[v], rptr[v + 1]
        r = hi - lo
        for j in range(lo, hi):
            w = rworkers[j]
            av[w] += 1
            if r > 1:
                if j == rmaster[v]:
                    units[w] += 2 * (r - 1) * msg
                else:
                    units[w] += 2 * msg
    return av, units


def trace_cost(trace: WorkloadTrace, g, p, cm: CostModel | None = None) -> ProcessingResult:
    cm = cm or CostModel()
    if p.assignment.size != g.num_edges or g.num_vertices != trace.num_vertices:
        raise SimulationError("partitioning does not match the traced graph")
    start = time.perf_counter()
    rt = replica_table(g, p)
    msg = CostModel.msg_size(trace.workload)
    counts, actives = [], []
    last_key, last = None, None
    for f, a in trace.steps:
        key = (id(f), id(a))
        if key != last_key:
            ae = np.bincount(p.assignment[trace.counted(f)], minlength=p.k)
            av, units = _replica_counts(a, rt.ptr, rt.workers, rt.master, p.k, msg)
            last = (ae, av, units)
            last_key = key
        counts.append(last)
        actives.append(a.size)
    wall = (time.perf_counter() - start) * 1e3
    return assemble_result(trace.workload, cm, counts, actives, trace.output_digest, wall)

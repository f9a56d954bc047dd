"""Master/mirror vertex-cut BSP engine.

Each worker owns the edges of one partition and a local copy of every vertex those
edges touch. A superstep runs in three phases:

1. compute: each worker pushes along its local edges whose sender copy is flagged,
   reducing messages into per-vertex partials;
2. sync: activity flags are OR-reduced at the barrier (control traffic, not charged),
   then every mirror of an active replicated vertex sends its partial to the master
   and the master broadcasts the updated state back;
3. apply happens at the master between gather and broadcast.

Workers only read their local copies, so a missing broadcast shows up as a wrong
result rather than a cost discrepancy.
"""

from __future__ import annotations

import time

import numpy as np

from .programs import (
    DAMPING,
    INF,
    PR_INV,
    SYN_MOD,
    initial_senders,
    initial_state,
    kcore_threshold,
    output_digest,
    pagerank_contrib,
)
from .replicas import master_slot
from .workload import CostModel, ProcessingResult, SimulationError, WorkloadSpec, assemble_result


class _Worker:
    __slots__ = ("wid", "verts", "ls", "ld", "is_master", "replicas", "local", "send")

    def __init__(self, wid, src, dst):
        self.wid = wid
        self.verts = np.unique(np.concatenate([src, dst]))
        self.ls = np.searchsorted(self.verts, src)
        self.ld = np.searchsorted(self.verts, dst)


def _build_workers(g, p) -> tuple[list[_Worker], np.ndarray]:
    order = np.argsort(p.assignment, kind="stable")
    cuts = np.searchsorted(p.assignment[order], np.arange(p.k + 1))
    workers = []
    for w in range(p.k):
        e = order[cuts[w]:cuts[w + 1]]
        workers.append(_Worker(w, g.src[e], g.dst[e]))
    n = g.num_vertices
    replicas = np.zeros(n, np.int64)
    for wk in workers:
        replicas[wk.verts] += 1
    # replica lists per vertex, workers ascending, then the hashed master slot
    v_all = np.concatenate([wk.verts for wk in workers]) if workers else np.zeros(0, np.int64)
    w_all = np.concatenate([np.full(wk.verts.size, wk.wid) for wk in workers]) if workers else v_all
    by_v = np.argsort(v_all, kind="stable")
    first = np.zeros(n + 1, np.int64)
    np.cumsum(replicas, out=first[1:])
    master = np.full(n, -1, np.int64)
    has = np.flatnonzero(replicas > 0)
    master[has] = w_all[by_v][first[has] + master_slot(has, replicas[has])]
    for wk in workers:
        wk.is_master = master[wk.verts] == wk.wid
        wk.replicas = replicas[wk.verts]
    return workers, master


# -- per-algorithm local reduction, master combine, master apply ------------------

def _local_partial(a, wk, s_idx, r_idx, outdeg, n):
    """Reduce the messages of one worker; returns (receiver local idx, partial)."""
    loc = wk.local
    rec = np.unique(r_idx)
    if a == "pagerank":
        part = np.zeros(wk.verts.size, np.int64)
        np.add.at(part, r_idx, pagerank_contrib(loc["rank"][s_idx], outdeg[wk.verts[s_idx]]))
        return rec, part[rec]
    if a in ("cc", "sssp"):
        field, plus = ("label", 0) if a == "cc" else ("dist", 1)
        part = np.full(wk.verts.size, INF, np.int64)
        np.minimum.at(part, r_idx, loc[field][s_idx] + plus)
        return rec, part[rec]
    if a == "kcores":
        val = np.where(loc["alive"][s_idx] == 1, 1, -1).astype(np.int64)
        val[s_idx == r_idx] = 0
        part = np.zeros(wk.verts.size, np.int64)
        np.add.at(part, r_idx, val)
        return rec, part[rec]
    if a == "label_propagation":
        keys = wk.verts[r_idx] * n + loc["label"][s_idx]
        uk, cnt = np.unique(keys, return_counts=True)
        return rec, (uk, cnt)
    if a == "synthetic":
        x = loc["x"]
        part = np.zeros((wk.verts.size, x.shape[1]), np.int64)
        np.add.at(part, r_idx, x[s_idx])
        return rec, part[rec] % SYN_MOD
    raise SimulationError(f"unknown algorithm {a!r}")


def _new_acc(a, g, state):
    n = g.num_vertices
    if a in ("pagerank", "kcores"):
        return np.zeros(n, np.int64)
    if a in ("cc", "sssp"):
        return np.full(n, INF, np.int64)
    if a == "synthetic":
        return np.zeros_like(state["x"])
    return []


def _combine(a, acc, gids, partial):
    if a in ("pagerank", "kcores"):
        acc[gids] += partial
    elif a in ("cc", "sssp"):
        acc[gids] = np.minimum(acc[gids], partial)
    elif a == "synthetic":
        acc[gids] = (acc[gids] + partial) % SYN_MOD
    else:
        acc.append(partial)
    return acc


def _apply(a, g, state, active, acc, kc):
    """Update master state for the active vertices; returns next senders or None for all."""
    n = g.num_vertices
    if a == "pagerank":
        state["rank"][active] = (1.0 - DAMPING) / n + DAMPING * (acc[active].astype(np.float64) * PR_INV)
        return None
    if a in ("cc", "sssp"):
        field = "label" if a == "cc" else "dist"
        old = state[field][active]
        new = np.minimum(old, acc[active])
        state[field][active] = new
        return active[new < old]
    if a == "kcores":
        state["count"][active] += acc[active]
        dying = active[(state["alive"][active] == 1) & (state["count"][active] < kc)]
        state["alive"][dying] = 0
        return dying
    if a == "synthetic":
        state["x"][active] = (state["x"][active] + acc[active]) % SYN_MOD
        return None
    if a == "label_propagation":
        if acc:
            keys = np.concatenate([uk for uk, _ in acc])
            cnts = np.concatenate([c for _, c in acc])
            uk, inv = np.unique(keys, return_inverse=True)
            tot = np.zeros(uk.size, np.int64)
            np.add.at(tot, inv, cnts)
            v, lab = uk // n, uk % n
            order = np.lexsort((lab, -tot, v))
            v, lab = v[order], lab[order]
            head = np.ones(v.size, bool)
            head[1:] = v[1:] != v[:-1]
            state["label"][v[head]] = lab[head]
        return None
    raise SimulationError(f"unknown algorithm {a!r}")


def run_workload(g, p, w: WorkloadSpec, cm: CostModel | None = None, workers: int | None = None) -> ProcessingResult:
    """Execute ``w`` on the partitioned graph, one worker per partition."""
    cm = cm or CostModel()
    if workers is not None and workers != p.k:
        raise SimulationError(f"workers ({workers}) must equal k ({p.k})")
    if p.assignment.size != g.num_edges:
        raise SimulationError("partitioning does not match the graph")
    if p.assignment.size and (p.assignment.min() < 0 or p.assignment.max() >= p.k):
        raise SimulationError("assignment has partition ids outside [0, k)")
    start = time.perf_counter()
    a = w.algorithm
    n = g.num_vertices
    wks, _ = _build_workers(g, p)
    state = initial_state(g, w)
    send = np.zeros(n, bool)
    send[initial_senders(g, w, state)] = True
    for wk in wks:
        wk.local = {f: arr[wk.verts].copy() for f, arr in state.items()}
        wk.send = send[wk.verts].copy()
    outdeg = g.out_degrees()
    kc = kcore_threshold(g)
    msg = CostModel.msg_size(w)
    counts, actives = [], []

    while True:
        step = len(counts)
        if w.fixed_iterations:
            if step == w.iterations:
                break
        elif not send.any() or (w.iterations and step == w.iterations):
            break
        received = np.zeros(n, bool)
        ae = np.zeros(p.k, np.int64)
        partials = []
        for wk in wks:
            fs = wk.send[wk.ls]
            if w.directed:
                ae[wk.wid] = fs.sum()
                s_idx, r_idx = wk.ls[fs], wk.ld[fs]
            else:
                fd = wk.send[wk.ld] & (wk.ls != wk.ld)
                ae[wk.wid] = (fs | wk.send[wk.ld]).sum()
                s_idx = np.concatenate([wk.ls[fs], wk.ld[fd]])
                r_idx = np.concatenate([wk.ld[fs], wk.ls[fd]])
            rec, part = _local_partial(a, wk, s_idx, r_idx, outdeg, n)
            received[wk.verts[rec]] = True
            partials.append((rec, part))
        active_mask = send | received

        av = np.zeros(p.k, np.int64)
        units = np.zeros(p.k, np.int64)
        for wk in wks:
            act = active_mask[wk.verts]
            av[wk.wid] = act.sum()
            repl = act & (wk.replicas > 1)
            units[wk.wid] = 2 * msg * (
                int((repl & ~wk.is_master).sum()) + int((wk.replicas[repl & wk.is_master] - 1).sum())
            )

        acc = _new_acc(a, g, state)
        for wk, (rec, part) in zip(wks, partials):
            acc = _combine(a, acc, wk.verts[rec], part)
        active = np.flatnonzero(active_mask)
        nxt = _apply(a, g, state, active, acc, kc)
        send[:] = False
        if nxt is None:
            send[:] = True
        else:
            send[nxt] = True

        for wk in wks:
            idx = np.flatnonzero(active_mask[wk.verts])
            gids = wk.verts[idx]
            for f, arr in state.items():
                wk.local[f][idx] = arr[gids]
            wk.send[idx] = send[gids]

        counts.append((ae, av, units))
        actives.append(active.size)

    wall = (time.perf_counter() - start) * 1e3
    return assemble_result(w, cm, counts, actives, output_digest(a, state), wall)

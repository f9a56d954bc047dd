"""Numba kernels for the stateful partitioners.

Each kernel returns ``(assignment, ops)``; ``ops`` counts inner-loop steps and
feeds the deterministic partitioning-time model.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _has(rep, v, p):
    return (rep[v, p >> 6] >> np.uint64(p & 63)) & np.uint64(1)


@numba.njit(cache=True, inline="always")
def _set(rep, v, p):
    rep[v, p >> 6] |= np.uint64(1) << np.uint64(p & 63)


@numba.njit(cache=True)
def _hdrf_pick(u, v, du, dv, rep, load, bounds, lam, cap):
    minload, maxload = bounds[0], bounds[1]
    total = du + dv
    bonus_u = 2.0 - du / total
    bonus_v = 2.0 - dv / total
    scale = lam / (1.0 + maxload - minload)
    k = load.size
    best = -1
    best_score = -1.0
    for w in range(rep.shape[1]):
        ru = rep[u, w]
        rv = rep[v, w]
        hi = min(64, k - w * 64)
        for b in range(hi):
            p = w * 64 + b
            if load[p] >= cap:
                continue
            score = scale * (maxload - load[p])
            if (ru >> np.uint64(b)) & np.uint64(1):
                score += bonus_u
            if (rv >> np.uint64(b)) & np.uint64(1):
                score += bonus_v
            if score > best_score:
                best_score = score
                best = p
    return best


@numba.njit(cache=True)
def _commit(p, u, v, rep, load, bounds):
    # bounds = (minload, maxload, number of partitions at minload)
    load[p] += 1
    _set(rep, u, p)
    _set(rep, v, p)
    if load[p] > bounds[1]:
        bounds[1] = load[p]
    if load[p] - 1 == bounds[0]:
        bounds[2] -= 1
        if bounds[2] == 0:
            bounds[0] += 1
            for q in range(load.size):
                if load[q] == bounds[0]:
                    bounds[2] += 1


@numba.njit(cache=True)
def _hdrf_state(n, k):
    rep = np.zeros((n, (k + 63) // 64), np.uint64)
    load = np.zeros(k, np.int64)
    bounds = np.zeros(3, np.int64)
    bounds[2] = k
    return rep, load, bounds


@numba.njit(cache=True)
def hdrf(n, src, dst, k, lam, cap):
    # ops models a plain implementation that scores all k partitions per edge
    m = src.size
    rep, load, bounds = _hdrf_state(n, k)
    deg = np.zeros(n, np.int64)
    out = np.empty(m, np.int64)
    for i in range(m):
        u, v = src[i], dst[i]
        deg[u] += 1
        deg[v] += 1
        p = _hdrf_pick(u, v, deg[u], deg[v], rep, load, bounds, lam, cap)
        out[i] = p
        _commit(p, u, v, rep, load, bounds)
    return out, m * (k + 1)


@numba.njit(cache=True)
def two_phase(n, src, dst, k, cap, lam):
    """Streaming clustering, then cluster-aware assignment with HDRF fallback."""
    m = src.size
    deg = np.zeros(n, np.int64)
    for i in range(m):
        deg[src[i]] += 1
        deg[dst[i]] += 1
    ops = m

    # pass 1: clusters grow by moving vertices while both volumes are under the cap
    vol_cap = max(1.0, m / k)
    cluster = np.arange(n)
    vol = deg.copy().astype(np.float64)
    for i in range(m):
        u, v = src[i], dst[i]
        cu, cv = cluster[u], cluster[v]
        if cu == cv or vol[cu] > vol_cap or vol[cv] > vol_cap:
            continue
        if vol[cu] - deg[u] <= vol[cv] - deg[v]:
            x, frm, to = u, cu, cv
        else:
            x, frm, to = v, cv, cu
        if vol[to] + deg[x] <= vol_cap:
            vol[to] += deg[x]
            vol[frm] -= deg[x]
            cluster[x] = to
    ops += m

    # pass 2: clusters largest-first onto the least-loaded partition
    order = np.argsort(-vol, kind="mergesort")
    cpart = np.zeros(n, np.int64)
    pvol = np.zeros(k, np.float64)
    for j in range(n):
        c = order[j]
        if vol[c] <= 0:
            break
        best = 0
        for p in range(1, k):
            if pvol[p] < pvol[best]:
                best = p
        cpart[c] = best
        pvol[best] += vol[c]
        ops += k

    # pass 3: stream edges
    rep, load, bounds = _hdrf_state(n, k)
    out = np.empty(m, np.int64)
    for i in range(m):
        u, v = src[i], dst[i]
        pu = cpart[cluster[u]]
        if pu == cpart[cluster[v]] and load[pu] < cap:
            p = pu
            ops += 1
        else:
            p = _hdrf_pick(u, v, deg[u], deg[v], rep, load, bounds, lam, cap)
            ops += k + 1
        out[i] = p
        _commit(p, u, v, rep, load, bounds)
    return out, ops


# bucket queue keyed by remaining unassigned degree; keys only go down while queued
@numba.njit(cache=True)
def _bq_insert(head, nxt, prv, key, v, kv):
    key[v] = kv
    prv[v] = -1
    nxt[v] = head[kv]
    if head[kv] >= 0:
        prv[head[kv]] = v
    head[kv] = v


@numba.njit(cache=True)
def _bq_remove(head, nxt, prv, key, v):
    kv = key[v]
    if prv[v] >= 0:
        nxt[prv[v]] = nxt[v]
    else:
        head[kv] = nxt[v]
    if nxt[v] >= 0:
        prv[nxt[v]] = prv[v]
    key[v] = -1


@numba.njit(cache=True)
def _detach(v, h, ptr, live, inc, nbr, pos):
    # swap-remove half-edge h from v's live incidence list
    i = pos[h]
    last = ptr[v] + live[v] - 1
    g = inc[last]
    inc[i] = g
    nbr[i] = nbr[last]
    pos[g] = i
    inc[last] = h
    pos[h] = last
    live[v] -= 1


@numba.njit(cache=True)
def neighborhood_expansion(n, src, dst, k, cap, perm):
    """Grow one partition at a time from a random seed vertex.

    Core set C and boundary S: the boundary vertex with the fewest unassigned
    edges joins C, its unassigned neighbours join S, and every unassigned edge
    between a new boundary vertex and S is assigned. A partition stops at
    ceil(|E|/k) edges (hard cap ``cap``); leftovers go to the least-loaded part.
    """
    m = src.size
    # half-edge 2e sits in src[e]'s list, 2e+1 in dst[e]'s list; a self-loop only has 2e
    cnt = np.zeros(n + 1, np.int64)
    for i in range(m):
        cnt[src[i] + 1] += 1
        if dst[i] != src[i]:
            cnt[dst[i] + 1] += 1
    ptr = np.cumsum(cnt)
    fill = ptr[:-1].copy()
    inc = np.empty(ptr[n], np.int64)
    nbr = np.empty(ptr[n], np.int32)
    pos = np.zeros(2 * m, np.int64)
    for i in range(m):
        u, v = src[i], dst[i]
        inc[fill[u]] = 2 * i
        nbr[fill[u]] = v
        pos[2 * i] = fill[u]
        fill[u] += 1
        if v != u:
            inc[fill[v]] = 2 * i + 1
            nbr[fill[v]] = u
            pos[2 * i + 1] = fill[v]
            fill[v] += 1
    live = (ptr[1:] - ptr[:-1]).copy()
    maxdeg = 0
    for v in range(n):
        if live[v] > maxdeg:
            maxdeg = live[v]
    ops = 2 * m

    out = np.full(m, -1, np.int64)
    load = np.zeros(k, np.int64)
    in_s = np.full(n, -1, np.int32)
    in_c = np.full(n, -1, np.int32)
    head = np.full(maxdeg + 1, -1, np.int64)
    nxt = np.full(n, -1, np.int64)
    prv = np.full(n, -1, np.int64)
    key = np.full(n, -1, np.int64)
    cursor = 0
    unassigned = m
    target = (m + k - 1) // k

    for p in range(k):
        minptr = maxdeg + 1
        full = False
        while load[p] < target and unassigned > 0 and not full:
            while minptr <= maxdeg and head[minptr] < 0:
                minptr += 1
                ops += 1
            if minptr <= maxdeg:
                x = head[minptr]
                _bq_remove(head, nxt, prv, key, x)
            else:
                while cursor < n and live[perm[cursor]] == 0:
                    cursor += 1
                    ops += 1
                if cursor == n:
                    break
                x = perm[cursor]
                in_s[x] = p
            in_c[x] = p
            ops += 1
            while live[x] > 0 and not full:
                last = ptr[x] + live[x] - 1
                h = inc[last]
                y = nbr[last]
                ops += 1
                if load[p] >= cap:
                    full = True
                    break
                if y == x:
                    out[h >> 1] = p
                    load[p] += 1
                    unassigned -= 1
                    _detach(x, h, ptr, live, inc, nbr, pos)
                    continue
                # y is outside S: every open edge of x leads out of S
                in_s[y] = p
                i = ptr[y]
                while i < ptr[y] + live[y]:
                    z = nbr[i]
                    ops += 1
                    if in_s[z] != p:
                        i += 1
                        continue
                    if load[p] >= cap:
                        full = True
                        break
                    hy = inc[i]
                    out[hy >> 1] = p
                    load[p] += 1
                    unassigned -= 1
                    _detach(y, hy, ptr, live, inc, nbr, pos)
                    if z != y:
                        _detach(z, hy ^ 1, ptr, live, inc, nbr, pos)
                        if key[z] >= 0:
                            _bq_remove(head, nxt, prv, key, z)
                            _bq_insert(head, nxt, prv, key, z, live[z])
                            if live[z] < minptr:
                                minptr = live[z]
                            ops += 1
                if full:
                    break
                _bq_insert(head, nxt, prv, key, y, live[y])
                if live[y] < minptr:
                    minptr = live[y]
        for b in range(maxdeg + 1):
            while head[b] >= 0:
                _bq_remove(head, nxt, prv, key, head[b])
                ops += 1

    for i in range(m):
        if out[i] < 0:
            best = 0
            for p in range(1, k):
                if load[p] < load[best]:
                    best = p
            out[i] = best
            load[best] += 1
            ops += k
    return out, ops

import math

import networkx as nx
import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ease.graph import Graph
from ease.hashing import mix64_int
from ease.partition import Partitioning, partition
from ease.procsim import (
    CostModel,
    SimulationError,
    WorkloadSpec,
    replica_table,
    replication_message_volume,
    run_workload,
    trace_workload,
    workload_from_name,
)
from ease.procsim.programs import INF, SYN_MOD, kcore_threshold, sssp_source, synthetic_init
from ease.procsim.replicas import MASTER_SEED

from .conftest import random_graph


def uf_components(g):
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        a, b = find(u), find(v)
        if a != b:
            parent[max(a, b)] = min(a, b)
    lab = {}
    for v in range(g.num_vertices):
        r = find(v)
        lab.setdefault(r, v)
    return np.array([lab[find(v)] for v in range(g.num_vertices)])


def bfs_dist(g, source):
    a = csr_matrix((np.ones(g.num_edges), (g.src, g.dst)), shape=(g.num_vertices,) * 2)
    a.sum_duplicates()
    a.data[:] = 1.0
    d = dijkstra(a, directed=True, indices=source)
    return np.where(np.isinf(d), INF, d).astype(np.int64)


def power_iteration(g, iters, damping=0.85):
    n = g.num_vertices
    outdeg = g.out_degrees().astype(float)
    r = np.full(n, 1.0 / n)
    for _ in range(iters):
        contrib = np.where(outdeg[g.src] > 0, r[g.src] / np.maximum(outdeg[g.src], 1), 0.0)
        r = (1 - damping) / n + damping * np.bincount(g.dst, contrib, minlength=n)
    return r


def peel(g, t):
    """Queue-based peeling: drop vertices with fewer than t live incident edges (self-loops ignored)."""
    adj = [[] for _ in range(g.num_vertices)]
    for u, v in g.edges():
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    cnt = [len(a) for a in adj]
    alive = np.ones(g.num_vertices, bool)
    queue = [v for v in range(g.num_vertices) if cnt[v] < t]
    for v in queue:
        alive[v] = False
    while queue:
        v = queue.pop()
        for x in adj[v]:
            cnt[x] -= 1
            if alive[x] and cnt[x] < t:
                alive[x] = False
                queue.append(x)
    return alive


def label_prop(g, iters):
    n = g.num_vertices
    lab = np.arange(n)
    for _ in range(iters):
        inc = [dict() for _ in range(n)]
        for u, v in g.edges():
            inc[v][lab[u]] = inc[v].get(lab[u], 0) + 1
            if u != v:
                inc[u][lab[v]] = inc[u].get(lab[v], 0) + 1
        new = lab.copy()
        for v in range(n):
            if inc[v]:
                new[v] = min(inc[v], key=lambda x: (-inc[v][x], x))
        lab = new
    return lab


def synthetic_oracle(g, iters, s):
    x = synthetic_init(g.num_vertices, s).astype(object)
    for _ in range(iters):
        acc = np.zeros_like(x)
        for u, v in g.edges():
            acc[v] = acc[v] + x[u]
        x = (x + acc % int(SYN_MOD)) % int(SYN_MOD)
    return x.astype(np.int64)


GRAPHS = [random_graph(np.random.default_rng(s)) for s in range(12)]


@pytest.mark.parametrize("g", GRAPHS)
def test_cc_union_find(g):
    t = trace_workload(g, WorkloadSpec("cc"))
    assert np.array_equal(t.state["label"], uf_components(g))


@pytest.mark.parametrize("g", GRAPHS)
def test_sssp_dijkstra(g):
    w = WorkloadSpec("sssp", seed=4)
    t = trace_workload(g, w)
    assert np.array_equal(t.state["dist"], bfs_dist(g, sssp_source(g, 4)))


@pytest.mark.parametrize("g", GRAPHS)
def test_pagerank_power_iteration(g):
    t = trace_workload(g, WorkloadSpec("pagerank", iterations=10))
    assert np.max(np.abs(t.state["rank"] - power_iteration(g, 10))) <= 1e-9


@pytest.mark.parametrize("g", GRAPHS)
def test_kcores_peeling(g):
    t = trace_workload(g, WorkloadSpec("kcores"))
    assert np.array_equal(t.state["alive"].astype(bool), peel(g, kcore_threshold(g)))


def test_kcores_networkx_on_simple_graph():
    h = nx.gnm_random_graph(80, 400, seed=3)
    g = Graph(80, np.array([u for u, _ in h.edges()]), np.array([v for _, v in h.edges()]))
    t = trace_workload(g, WorkloadSpec("kcores"))
    core = set(nx.k_core(h, kcore_threshold(g)).nodes)
    assert set(np.flatnonzero(t.state["alive"]).tolist()) == core


@pytest.mark.parametrize("g", GRAPHS[:6])
def test_label_propagation(g):
    t = trace_workload(g, WorkloadSpec("label_propagation", iterations=4))
    assert np.array_equal(t.state["label"], label_prop(g, 4))


@pytest.mark.parametrize("g", GRAPHS[:6])
def test_synthetic(g):
    t = trace_workload(g, WorkloadSpec("synthetic", iterations=3, s=3))
    assert np.array_equal(t.state["x"], synthetic_oracle(g, 3, 3))


WORKLOADS = [workload_from_name(n) for n in
             ("pagerank", "cc", "sssp", "kcores", "synthetic-low", "synthetic-high", "label_propagation")]


@pytest.mark.parametrize("w", WORKLOADS, ids=lambda w: w.name)
def test_engine_matches_trace_and_digest_is_partition_invariant(w):
    rng = np.random.default_rng(77)
    for _ in range(3):
        g = random_graph(rng, 60, 300)
        ref = trace_workload(g, w)
        for k in (1, 2, 8):
            for pid in ("hdrf-1.0", "1ds", "ne"):
                p, _ = partition(g, pid, k, alpha=1.5)
                a = run_workload(g, p, w)
                b = ref.cost(g, p)
                assert a.output_digest == ref.output_digest
                assert a.cost_total == b.cost_total
                assert a.superstep_costs == b.superstep_costs
                assert a.active_vertices == b.active_vertices
                if k == 1:
                    assert a.comm_cost == 0.0


def test_cost_hand_example():
    # path 0->1->2 cut at vertex 1: compute max(1 + 0.1*2) = 1.2, comm 0.05/8 * 16 = 0.1
    g = Graph.from_edges([(0, 1), (1, 2)])
    p = Partitioning(2, np.array([0, 1]), 1.0, "manual", 0)
    r = run_workload(g, p, WorkloadSpec("synthetic", iterations=1))
    assert r.compute_cost == pytest.approx(1.2)
    assert r.comm_cost == pytest.approx(0.1)
    assert r.cost_per_iteration == pytest.approx(1.3)
    r = run_workload(g, p, WorkloadSpec("synthetic", iterations=2, s=10))
    assert r.comm_cost == pytest.approx(2 * 0.05 / 8 * 160)
    assert r.target == r.cost_per_iteration


def test_replication_message_volume_examples():
    g = Graph.from_edges([(0, 1), (1, 2), (1, 3)])
    p = Partitioning(3, np.array([0, 1, 2]), 1.0, "manual", 0)
    # vertex 1 sits on three workers
    assert replication_message_volume(g, p, np.array([1]), 8) == 2 * 2 * 8
    assert replication_message_volume(g, p, np.array([0, 2, 3]), 8) == 0
    assert replication_message_volume(g, p, np.ones(4, bool), 80) == 2 * 2 * 80


def test_master_is_hashed_replica():
    g = random_graph(np.random.default_rng(1), 30, 120)
    p, _ = partition(g, "1ds", 4)
    rt = replica_table(g, p)
    for v in range(g.num_vertices):
        lo, hi = rt.ptr[v], rt.ptr[v + 1]
        if hi > lo:
            assert int(rt.master[v]) == int(lo) + mix64_int(v, MASTER_SEED) % int(hi - lo)


def test_workload_validation():
    with pytest.raises(SimulationError):
        WorkloadSpec("bfs")
    with pytest.raises(SimulationError):
        WorkloadSpec("pagerank")
    with pytest.raises(SimulationError):
        WorkloadSpec("cc", s=2)
    assert workload_from_name("synthetic-high").s == 10
    with pytest.raises(SimulationError):
        workload_from_name("nope")


def test_cost_model_round_trip(tmp_path):
    cm = CostModel(2.0, 0.5, 0.1, 1e-2)
    path = tmp_path / "cm.json"
    path.write_text('{"alpha_e": 2, "alpha_v": 0.5, "beta": 0.1, "unit_ms": 0.01}')
    assert CostModel.load(path) == cm
    with pytest.raises(SimulationError):
        CostModel.from_dict({"gamma": 1})
    with pytest.raises(SimulationError):
        CostModel(beta=0)


def test_fewer_replicas_cost_less_comm(small_rmat):
    w = WorkloadSpec("pagerank", iterations=3)
    t = trace_workload(small_rmat, w)
    comm = {}
    for pid in ("ne", "1ds"):
        p, _ = partition(small_rmat, pid, 16)
        comm[pid] = t.cost(small_rmat, p).comm_cost
    assert comm["ne"] < comm["1ds"]

import numpy as np
import pytest

from ease.dataset import InMemoryGraph, build_datasets
from ease.graph import RMAT_COMBOS, RmatConfig, compute_properties, generate_rmat
from ease.ml import ModelSpec
from ease.partition import QualityMetrics
from ease.predict import (
    PredictError,
    PredictorSuite,
    enrich_and_retrain,
    error_heatmap,
    predict_partition_time,
    predict_processing_time,
    predict_quality,
    props_from_row,
    train_suite,
)
from ease.select import (
    StrategyComparison,
    argmin_objective,
    evaluate_from_rows,
    normalize_goal,
    render_csv,
    render_table,
    select_partitioner,
)

PIDS = ["1ds", "dbh", "hdrf-1.0", "ne"]
WL = ["pagerank", "cc", "synthetic-high"]
GRID = (
    ModelSpec.make("knn", k_nn=3),
    ModelSpec.make("polyridge", degree=1, lam=1e-3),
    ModelSpec.make("random_forest", n_trees=10, max_depth=None),
)


def rmat_suite(n_graphs, seed):
    rng = np.random.default_rng(seed)
    out = []
    combos = list(RMAT_COMBOS.items())
    for i in range(n_graphs):
        combo, (a, b, c, d) = combos[i % len(combos)]
        nv = int(2 ** rng.integers(8, 11))
        cfg = RmatConfig(a, b, c, d, nv, int(rng.integers(2000, 6000)), seed=int(rng.integers(2**31)))
        out.append(InMemoryGraph(f"t{seed}_{i}_{combo}", generate_rmat(cfg), combo=combo))
    return out


@pytest.fixture(scope="module")
def data():
    train = rmat_suite(14, 1)
    test = rmat_suite(4, 2)
    tr = build_datasets(train, PIDS, (4, 8), WL, runtime_k=4)
    te = build_datasets(test, PIDS, (4, 8), WL, runtime_k=4)
    return tr, te, test


@pytest.fixture(scope="module")
def suite(data):
    tr, _, _ = data
    return train_suite(tr.quality, tr.runtime, "advanced", seed=0, grid=GRID, folds=3)


def test_suite_components(suite):
    assert set(suite.quality) == {"rf", "b_edge", "b_v", "b_src", "b_dst"}
    assert set(suite.processing_time) == set(WL)
    assert suite.partition_time is not None and suite.rf_basic is not None
    assert suite.partitioners == tuple(sorted(PIDS))
    assert suite.workload_iterations["pagerank"] == 10
    assert "avg_lcc" in suite.quality["rf"].columns and "rf" not in suite.quality["rf"].columns
    assert "avg_lcc" not in suite.quality["b_edge"].columns


def test_predictions_clamped_and_scaled(suite, data):
    _, _, test = data
    props = compute_properties(test[0].load(), "advanced")
    for pid in PIDS:
        q = predict_quality(suite, props, pid, 4)
        assert 1.0 <= q.rf <= 4.0
        assert min(q.b_edge, q.b_v, q.b_src, q.b_dst) >= 1.0
        assert predict_partition_time(suite, props, pid) >= 0.0
    q = predict_quality(suite, props, "ne", 4)
    p10 = predict_processing_time(suite, "pagerank", props, q)
    assert predict_processing_time(suite, "pagerank", props, q, iterations=20) == pytest.approx(2 * p10)
    assert predict_processing_time(suite, "cc", props, q, iterations=99) == predict_processing_time(suite, "cc", props, q)


def test_basic_props_fall_back_to_basic_rf(suite, data):
    _, _, test = data
    props = compute_properties(test[0].load(), "basic")
    assert predict_quality(suite, props, "ne", 8).rf >= 1.0


def test_unknown_inputs(suite, data):
    _, _, test = data
    props = compute_properties(test[0].load(), "advanced")
    with pytest.raises(PredictError):
        predict_quality(suite, props, "fennel", 4)
    with pytest.raises(PredictError):
        predict_processing_time(suite, "sssp", props, QualityMetrics(1, 1, 1, 1, 1))


def test_suite_round_trip(tmp_path, suite, data):
    _, te, _ = data
    path = tmp_path / "suite.json"
    suite.save(path)
    back = PredictorSuite.load(path)
    props = props_from_row(te.quality[0])
    for pid in PIDS:
        assert predict_quality(back, props, pid, 8) == predict_quality(suite, props, pid, 8)
    path.write_text(path.read_text().replace('"schema_version": 1', '"schema_version": 7', 1))
    with pytest.raises(Exception):
        PredictorSuite.load(path)


def test_selector_is_argmin(suite, data):
    _, _, test = data
    props = compute_properties(test[1].load(), "advanced")
    for goal in ("e2e", "processing"):
        rep = select_partitioner(suite, props, 4, "pagerank", goal)
        objs = {r.partitioner_id: r.predicted_objective for r in rep.rows}
        assert rep.chosen == argmin_objective(objs)
        if goal == "processing":
            assert all(r.predicted_partition_time == 0.0 for r in rep.rows)
        else:
            assert all(r.predicted_objective == pytest.approx(r.predicted_partition_time + r.predicted_processing)
                       for r in rep.rows)
    assert set(rep.to_dict()) >= {"chosen", "rows", "goal"}


def test_argmin_tie_break_and_goal_names():
    assert argmin_objective({"b": 1.0, "a": 1.0, "c": 0.5}) == "c"
    assert argmin_objective({"b": 1.0, "a": 1.0}) == "a"
    assert normalize_goal("e2e") == "end_to_end"
    with pytest.raises(PredictError):
        normalize_goal("fastest")


def test_strategy_bounds(suite, data):
    _, te, test = data
    props = {s.graph_id: compute_properties(s.load(), "advanced") for s in test}
    cmp = evaluate_from_rows(suite, te.runtime, props, "e2e")
    assert len(cmp.cells) == len(test) * len(WL)
    for c in cmp.cells:
        o = c.objectives
        assert o["S_O"] <= o["S_PS"] <= o["S_W"]
        assert o["S_O"] <= o["S_R"] <= o["S_W"]
        assert o["S_O"] == min(c.per_partitioner.values())
    assert cmp.ratio("S_PS", "S_O") >= 100.0
    assert 0.0 <= cmp.hit_rate() <= 1.0
    back = StrategyComparison.from_dict(cmp.to_dict())
    assert render_csv(back) == render_csv(cmp)
    assert "all" in render_table(cmp)
    drawn = evaluate_from_rows(suite, te.runtime, props, "e2e", random_draw=True, seed=3)
    for c in drawn.cells:
        assert c.objectives["S_R"] in c.per_partitioner.values()


def test_error_heatmap_and_enrichment(suite, data):
    _, te, _ = data
    hm = error_heatmap(suite, te.quality, targets=("rf",))["rf"]
    assert all(v is not None and v >= 0 for v in hm.cells.values())
    bigger = enrich_and_retrain(suite, te.quality, grid=GRID)
    assert len(bigger.training[0]) == len(suite.training[0]) + len(te.quality)
    assert set(bigger.quality) == set(suite.quality)

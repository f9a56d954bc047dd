import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.tree import DecisionTreeRegressor

from ease.ml import (
    FAST_GRID,
    FeatureError,
    FeatureMatrix,
    ModelBundle,
    ModelError,
    ModelSpec,
    cross_validate,
    feature_importance,
    fit,
    fold_indices,
    grid_search,
    group_importance,
    mape,
    rmse,
)
from ease.ml.trees import PackedForest, TreeArrays


def matrix(Z, cats=None):
    data = {f"x{j}": Z[:, j] for j in range(Z.shape[1])}
    cols = list(data)
    if cats is not None:
        data["part"] = np.array(cats, dtype=object)
        cols.append("part")
    return FeatureMatrix(tuple(cols), data, frozenset({"part"} if cats is not None else ()))


def test_metric_examples():
    assert rmse([1, 2, 3], [1, 2, 5]) == pytest.approx(np.sqrt(4 / 3))
    assert mape([1, 2, 4], [2, 2, 3]) == pytest.approx((1 + 0 + 0.25) / 3)
    assert mape([0.0], [0.0]) == 0.0


@given(st.lists(st.floats(0.1, 1e3), min_size=1, max_size=20))
def test_metrics_zero_on_exact(y):
    assert rmse(y, y) == 0.0 and mape(y, y) == 0.0


def test_polyridge_recovers_linear_function():
    rng = np.random.default_rng(0)
    Z = rng.normal(size=(200, 3))
    y = 3 + 2 * Z[:, 0] - Z[:, 1] + 0.5 * Z[:, 2]
    m = fit(ModelSpec.make("polyridge", degree=1, lam=0.0), matrix(Z), y)
    assert np.allclose(m.predict(matrix(Z)), y, atol=1e-9)
    q = fit(ModelSpec.make("polyridge", degree=2, lam=1e-8), matrix(Z), Z[:, 0] * Z[:, 1])
    assert np.allclose(q.predict(matrix(Z)), Z[:, 0] * Z[:, 1], atol=1e-5)


def test_polyridge_singular_without_penalty():
    Z = np.column_stack([np.arange(20.0), 2 * np.arange(20.0)])
    with pytest.raises(ModelError):
        fit(ModelSpec.make("polyridge", degree=1, lam=0.0), matrix(Z), np.arange(20.0))
    fit(ModelSpec.make("polyridge", degree=1, lam=1e-3), matrix(Z), np.arange(20.0))


def test_knn_k1_returns_training_targets():
    rng = np.random.default_rng(1)
    Z = rng.normal(size=(30, 2))
    y = rng.normal(size=30)
    m = fit(ModelSpec.make("knn", k_nn=1), matrix(Z), y)
    assert np.array_equal(m.predict(matrix(Z)), y)


def test_knn_uniform_mean_and_ties():
    Z = np.arange(12.0)[:, None]
    y = np.arange(12.0) * 10
    m = fit(ModelSpec.make("knn", k_nn=2), matrix(Z), y)
    # 5.5 is equidistant from 5 and 6
    assert m.predict(matrix(np.array([[5.5]])))[0] == pytest.approx(55.0)
    # 0.5 ties 0 and 1; then stable order picks the lower index first
    m3 = fit(ModelSpec.make("knn", k_nn=3), matrix(Z), y)
    assert m3.predict(matrix(np.array([[0.0]])))[0] == pytest.approx(10.0)


def best_stump(Z, y):
    best = (np.inf, None)
    for j in range(Z.shape[1]):
        vals = np.unique(Z[:, j])
        for lo, hi in zip(vals[:-1], vals[1:]):
            left = Z[:, j] <= (lo + hi) / 2
            sse = ((y[left] - y[left].mean()) ** 2).sum() + ((y[~left] - y[~left].mean()) ** 2).sum()
            if sse < best[0] - 1e-12:
                pred = np.where(left, y[left].mean(), y[~left].mean())
                best = (sse, pred)
    return best[1]


def test_depth_one_tree_matches_stump_oracle():
    rng = np.random.default_rng(2)
    Z = rng.integers(0, 50, size=(60, 3)).astype(float)
    y = np.where(Z[:, 1] > 20, 5.0, 1.0) + rng.normal(scale=0.1, size=60)
    m = fit(ModelSpec.make("gbt", n_trees=1, rate=1.0, depth=1), matrix(Z), y)
    assert np.allclose(m.predict(matrix(Z)), best_stump(Z, y), atol=1e-9)


def test_own_traversal_matches_sklearn():
    rng = np.random.default_rng(3)
    Z = rng.normal(size=(300, 4))
    y = np.sin(Z[:, 0]) + Z[:, 1] ** 2
    est = DecisionTreeRegressor(max_depth=8, random_state=0).fit(Z, y)
    forest = PackedForest.pack([TreeArrays.from_sklearn(est)])
    Q = rng.normal(size=(500, 4))
    assert np.array_equal(forest.sum_predict(Q), est.predict(Q))
    t = TreeArrays.from_sklearn(est)
    back = TreeArrays.from_dict(json.loads(json.dumps(t.to_dict())))
    assert all(np.array_equal(getattr(t, f), getattr(back, f)) for f in TreeArrays.FIELDS)


def test_forest_and_boosting_fit_smooth_target():
    rng = np.random.default_rng(4)
    Z = rng.uniform(0, 1, size=(400, 2))
    y = 1 + Z[:, 0] + 2 * Z[:, 1]
    X = matrix(Z)
    for spec in (ModelSpec.make("random_forest", n_trees=30, max_depth=None, min_samples_leaf=1),
                 ModelSpec.make("gbt", n_trees=100, rate=0.1, depth=3)):
        m = fit(spec, X, y, seed=1)
        assert mape(y, m.predict(X)) < 0.05


def test_importance_sums_to_one_and_finds_signal():
    rng = np.random.default_rng(5)
    Z = rng.normal(size=(300, 3))
    cats = rng.choice(["a", "b", "c"], 300)
    y = 10 * Z[:, 2] + np.where(cats == "b", 5.0, 0.0)
    m = fit(ModelSpec.make("random_forest", n_trees=20, max_depth=None), matrix(Z, cats), y, seed=0)
    imp = feature_importance(m)
    assert sum(imp.values()) == pytest.approx(1.0, abs=1e-9)
    assert max(imp, key=imp.get) == "x2"
    grp = group_importance(m, imp)
    assert set(grp) == {"x0", "x1", "x2", "part"}
    assert grp["part"] > grp["x0"]
    with pytest.raises(ModelError):
        feature_importance(fit(ModelSpec.make("knn", k_nn=3), matrix(Z), y))


def test_bundle_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    Z = rng.normal(size=(80, 2))
    cats = rng.choice(["p", "q"], 80)
    y = Z[:, 0] + (cats == "q")
    X = matrix(Z, cats)
    for spec in FAST_GRID:
        m = fit(spec, X, y, seed=3, target="t", feature_level="basic")
        path = tmp_path / "m.json"
        m.save(path)
        d = json.loads(path.read_text())
        assert {"tool_version", "schema_version", "seed"} <= set(d)
        back = ModelBundle.load(path)
        assert np.array_equal(back.predict(X), m.predict(X)), spec.label


def test_fit_is_deterministic():
    rng = np.random.default_rng(7)
    Z = rng.normal(size=(100, 3))
    y = Z.sum(axis=1)
    spec = ModelSpec.make("random_forest", n_trees=10, max_depth=5)
    a = fit(spec, matrix(Z), y, seed=9).to_dict()
    b = fit(spec, matrix(Z), y, seed=9).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_feature_errors():
    Z = np.ones((12, 1))
    m = fit(ModelSpec.make("knn", k_nn=1), matrix(Z, ["a"] * 12), np.ones(12))
    with pytest.raises(FeatureError):
        m.predict(matrix(Z[:1], ["zzz"]))
    with pytest.raises(FeatureError):
        m.predict(matrix(Z[:1]))
    with pytest.raises(FeatureError):
        FeatureMatrix.from_records([{"a": None}], ["a"])
    with pytest.raises(ModelError):
        fit(ModelSpec.make("knn"), matrix(np.ones((5, 1))), np.ones(5))
    with pytest.raises(ModelError):
        ModelSpec.make("svm")


def test_folds_partition_rows():
    f = fold_indices(23, 5, seed=1)
    assert len(f) == 5
    assert sorted(np.concatenate(f).tolist()) == list(range(23))
    assert [x.tolist() for x in f] == [x.tolist() for x in fold_indices(23, 5, seed=1)]


def test_grid_search_picks_generating_family():
    rng = np.random.default_rng(8)
    Z = rng.uniform(1, 2, size=(150, 2))
    y = 2 + 3 * Z[:, 0] - Z[:, 1]
    specs = [ModelSpec.make("knn", k_nn=5), ModelSpec.make("polyridge", degree=1, lam=1e-6),
             ModelSpec.make("random_forest", n_trees=20, max_depth=None)]
    res = grid_search(specs, matrix(Z), y, folds=5, seed=0)
    assert res.best.family == "polyridge"
    assert len(res.rows()) == 3 * 5
    cv = cross_validate(specs[1], matrix(Z), y, 5, 0)
    assert cv.mean_mape < 1e-6

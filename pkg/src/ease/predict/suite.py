from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .. import SCHEMA_VERSION, __version__
from ..dataset import QualityRow, RuntimeRow
from ..graph import FeatureLevel, GraphProperties
from ..ml import DEFAULT_GRID, FeatureError, FeatureMatrix, ModelBundle, ModelError, family_grid, grid_search, mape
from ..partition import QualityMetrics
from ..procsim import FIXED_ITERATION, CostModel, STANDARD_WORKLOADS
from .features import (
    PARTITIONER,
    PROCESSING_COLUMNS,
    QUALITY_METRICS,
    categorical_of,
    partition_time_columns,
    quality_columns,
    quality_level,
)

log = logging.getLogger(__name__)

MODEL_CHOICES = ("auto", "knn", "polyridge", "random_forest", "gbt")
COMPONENTS = ("quality", "partition_time", "processing_time")


class PredictError(ValueError):
    pass


def _matrix(records, columns) -> FeatureMatrix:
    return FeatureMatrix.from_records(records, columns, categorical_of(columns))


def _grid_for(model: str, grid) -> tuple:
    if model == "auto":
        return tuple(grid)
    if model not in MODEL_CHOICES:
        raise PredictError(f"unknown model choice {model!r}; expected one of {', '.join(MODEL_CHOICES)}")
    specs = family_grid(model, grid)
    if not specs:
        raise PredictError(f"grid has no {model} entries")
    return specs


def train_target(records, target: str, columns, level: str, grid, model="auto", folds=5, seed=0):
    if not records:
        raise PredictError(f"no rows to train {target}")
    if not hasattr(records[0], target) and not (isinstance(records[0], dict) and target in records[0]):
        raise PredictError(f"missing target column {target!r}")
    X = _matrix(records, columns)
    get = (lambda r: r[target]) if isinstance(records[0], dict) else (lambda r: getattr(r, target))
    y = np.array([get(r) for r in records], np.float64)
    res = grid_search(_grid_for(model, grid), X, y, folds, seed, target, level)
    log.info("trained %s (%s): %s cv-mape=%.4f", target, level, res.best.label, res.table[
        [s.spec for s in res.table].index(res.best)].mean_mape)
    return res


@dataclass(frozen=True, eq=False)
class PredictorSuite:
    quality: dict
    partition_time: Optional[ModelBundle]
    processing_time: dict
    feature_level: str
    partitioners: tuple
    runtime_k: int
    workload_iterations: dict
    cost_model: CostModel
    seed: int = 0
    # basic-level rf model kept when the suite level is advanced
    rf_basic: Optional[ModelBundle] = None
    settings: dict = field(default_factory=dict)
    cv: dict = field(default_factory=dict, repr=False)
    training: tuple = field(default=((), ()), repr=False, compare=False)

    # -- persistence ---------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "feature_level": self.feature_level,
            "partitioners": list(self.partitioners),
            "runtime_k": self.runtime_k,
            "workload_iterations": dict(self.workload_iterations),
            "cost_model": self.cost_model.to_dict(),
            "settings": dict(self.settings),
            "cv": self.cv,
            "components": {
                "quality": {t: m.to_dict() for t, m in sorted(self.quality.items())},
                "quality_rf_basic": self.rf_basic.to_dict() if self.rf_basic else None,
                "partition_time": self.partition_time.to_dict() if self.partition_time else None,
                "processing_time": {w: m.to_dict() for w, m in sorted(self.processing_time.items())},
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PredictorSuite":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise PredictError(f"suite schema_version {d.get('schema_version')} != {SCHEMA_VERSION}")
        c = d["components"]
        return cls(
            quality={t: ModelBundle.from_dict(m) for t, m in c["quality"].items()},
            partition_time=ModelBundle.from_dict(c["partition_time"]) if c["partition_time"] else None,
            processing_time={w: ModelBundle.from_dict(m) for w, m in c["processing_time"].items()},
            feature_level=d["feature_level"],
            partitioners=tuple(d["partitioners"]),
            runtime_k=int(d["runtime_k"]),
            workload_iterations={w: int(i) for w, i in d["workload_iterations"].items()},
            cost_model=CostModel.from_dict(d["cost_model"]),
            seed=int(d["seed"]),
            rf_basic=ModelBundle.from_dict(c["quality_rf_basic"]) if c.get("quality_rf_basic") else None,
            settings=d.get("settings", {}),
            cv=d.get("cv", {}),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "PredictorSuite":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _cv_summary(res) -> dict:
    return {"best": res.best.label, "table": [{"spec": r.spec.label, "mape": r.mean_mape, "rmse": r.mean_rmse} for r in res.table]}


def train_suite(
    quality_rows: Sequence[QualityRow],
    runtime_rows: Sequence[RuntimeRow],
    feature_level="basic",
    seed: int = 0,
    grid=DEFAULT_GRID,
    model: str = "auto",
    folds: int = 5,
    cost_model: Optional[CostModel] = None,
    runtime_k: Optional[int] = None,
    components: Sequence[str] = COMPONENTS,
    quality_targets: Sequence[str] = QUALITY_METRICS,
    grid_name: str = "custom",
) -> PredictorSuite:
    """Grid-search one model per quality target, one for partition time and one per workload."""
    level = FeatureLevel(feature_level).value
    quality_rows = list(quality_rows)
    runtime_rows = list(runtime_rows)
    unknown = set(components) - set(COMPONENTS)
    if unknown:
        raise PredictError(f"unknown components {sorted(unknown)}")
    if not quality_rows:
        raise PredictError("quality dataset is empty")
    quality, cv = {}, {}
    rf_basic = None
    if "quality" in components:
        for t in quality_targets:
            lv = quality_level(t, level)
            res = train_target(quality_rows, t, quality_columns(t, lv), lv, grid, model, folds, seed)
            quality[t] = res.model
            cv[f"quality/{t}"] = _cv_summary(res)
        if level == FeatureLevel.ADVANCED.value and "rf" in quality_targets:
            res = train_target(quality_rows, "rf", quality_columns("rf", "basic"), "basic", grid, model, folds, seed)
            rf_basic = res.model
            cv["quality/rf@basic"] = _cv_summary(res)

    if runtime_k is None:
        ks = sorted({r.k for r in runtime_rows})
        runtime_k = ks[0] if ks else 4
    pt = None
    if "partition_time" in components:
        rows = [r for r in quality_rows if r.k == runtime_k]
        if not rows:
            raise PredictError(f"no quality rows at k={runtime_k} for the partition-time model")
        lv = FeatureLevel.SIMPLE.value if level == "simple" else FeatureLevel.BASIC.value
        res = train_target(rows, "partition_time_ms", partition_time_columns(lv), lv, grid, model, folds, seed)
        pt = res.model
        cv["partition_time"] = _cv_summary(res)

    proc, iters = {}, {}
    if "processing_time" in components:
        for w in sorted({r.workload for r in runtime_rows}):
            rows = [r for r in runtime_rows if r.workload == w]
            res = train_target(rows, "target", PROCESSING_COLUMNS, "simple", grid, model, folds, seed)
            proc[w] = res.model
            iters[w] = rows[0].iterations
            cv[f"processing_time/{w}"] = _cv_summary(res)

    return PredictorSuite(
        quality=quality,
        partition_time=pt,
        processing_time=proc,
        feature_level=level,
        partitioners=tuple(sorted({r.partitioner_id for r in quality_rows})),
        runtime_k=int(runtime_k),
        workload_iterations=iters,
        cost_model=cost_model or CostModel(),
        seed=seed,
        rf_basic=rf_basic,
        settings={"model": model, "folds": folds, "grid": grid_name, "components": list(components),
                  "quality_targets": list(quality_targets)},
        cv=cv,
        training=(tuple(quality_rows), tuple(runtime_rows)),
    )


# -- inference -------------------------------------------------------------------

def _props_record(props: GraphProperties) -> dict:
    return {k: v for k, v in props.to_dict().items() if k != "level"}


def _check_partitioner(suite: PredictorSuite, pid: str) -> None:
    if pid not in suite.partitioners:
        raise PredictError(f"unseen partitioner {pid!r}; trained on: {', '.join(suite.partitioners)}")


def _one(model: ModelBundle, record: dict) -> float:
    missing = [c for c in model.columns if record.get(c) is None]
    if missing:
        raise FeatureError(f"missing feature(s) {', '.join(missing)} for {model.target}")
    X = FeatureMatrix.from_records([record], model.columns, categorical_of(model.columns))
    return float(model.predict(X)[0])


def predict_quality(suite: PredictorSuite, props: GraphProperties, partitioner_id: str, k: int) -> QualityMetrics:
    """Five predicted metrics, clamped to >= 1 and rf additionally to <= k."""
    _check_partitioner(suite, partitioner_id)
    if not suite.quality:
        raise PredictError("suite has no quality models")
    rec = dict(_props_record(props), k=k, **{PARTITIONER: partitioner_id})
    vals = {}
    for t in QUALITY_METRICS:
        m = suite.quality[t]
        if t == "rf" and suite.rf_basic is not None and (props.avg_triangles is None or props.avg_lcc is None):
            m = suite.rf_basic
        vals[t] = max(1.0, _one(m, rec))
    vals["rf"] = min(vals["rf"], float(k))
    return QualityMetrics(**vals)


def predict_partition_time(suite: PredictorSuite, props: GraphProperties, partitioner_id: str) -> float:
    _check_partitioner(suite, partitioner_id)
    if suite.partition_time is None:
        raise PredictError("suite has no partition-time model")
    rec = dict(_props_record(props), **{PARTITIONER: partitioner_id})
    return max(0.0, _one(suite.partition_time, rec))


def is_fixed_iteration(workload: str) -> bool:
    w = STANDARD_WORKLOADS.get(workload)
    return (w.algorithm if w else workload) in FIXED_ITERATION


def predict_processing_time(
    suite: PredictorSuite, workload: str, props: GraphProperties, quality: QualityMetrics, iterations: Optional[int] = None
) -> float:
    """Predicted cost units: per-iteration cost times iterations for fixed-iteration
    workloads, total cost for the rest (``iterations`` is then ignored)."""
    if workload not in suite.processing_time:
        raise PredictError(
            f"no processing-time model for {workload!r}; have: {', '.join(sorted(suite.processing_time))}"
        )
    train_iters = suite.workload_iterations[workload]
    rec = dict(_props_record(props), **quality.to_dict(), iterations=train_iters)
    raw = max(_one(suite.processing_time[workload], rec), 1e-9)
    if is_fixed_iteration(workload):
        n = train_iters if iterations is None else iterations
        if n < 1:
            raise PredictError(f"{workload} needs iterations >= 1")
        return raw * n
    return raw


def enrich_and_retrain(
    suite: PredictorSuite, extra_quality_rows: Sequence[QualityRow], seed: Optional[int] = None,
    base_quality_rows: Optional[Sequence[QualityRow]] = None,
    base_runtime_rows: Optional[Sequence[RuntimeRow]] = None,
    extra_runtime_rows: Sequence[RuntimeRow] = (),
    grid=None,
) -> PredictorSuite:
    """Full retrain on the union of the original and the extra rows."""
    bq = list(base_quality_rows if base_quality_rows is not None else suite.training[0])
    br = list(base_runtime_rows if base_runtime_rows is not None else suite.training[1])
    extra = list(extra_quality_rows)
    if not bq:
        raise PredictError("original training rows are unavailable; pass base_quality_rows")
    for r in list(extra) + list(extra_runtime_rows):
        if not isinstance(r, (QualityRow, RuntimeRow)):
            raise PredictError(f"enrichment row has unexpected type {type(r).__name__}")
    if any(not isinstance(r, QualityRow) for r in extra):
        raise PredictError("extra quality rows must be QualityRow records")
    s = suite.settings
    from ..ml import GRIDS

    return train_suite(
        bq + extra,
        br + list(extra_runtime_rows),
        suite.feature_level,
        suite.seed if seed is None else seed,
        grid if grid is not None else GRIDS.get(s.get("grid"), DEFAULT_GRID),
        s.get("model", "auto"),
        s.get("folds", 5),
        suite.cost_model,
        suite.runtime_k,
        s.get("components", COMPONENTS),
        s.get("quality_targets", QUALITY_METRICS),
        s.get("grid", "custom"),
    )


@dataclass(frozen=True)
class Heatmap:
    target: str
    graph_types: tuple
    partitioners: tuple
    # (graph_type, partitioner) -> MAPE, None where no test row exists
    cells: dict

    def rows(self) -> list[dict]:
        return [
            {"target": self.target, "graph_type": t, "partitioner_id": p, "mape": self.cells[(t, p)]}
            for t in self.graph_types
            for p in self.partitioners
        ]


def error_heatmap(suite: PredictorSuite, test_rows: Sequence[QualityRow], targets=QUALITY_METRICS) -> dict:
    """MAPE of the quality predictors per (graph type, partitioner)."""
    test_rows = list(test_rows)
    types = tuple(sorted({r.graph_type for r in test_rows}))
    pids = tuple(sorted({r.partitioner_id for r in test_rows}))
    out = {}
    for t in targets:
        preds = predict_quality_rows(suite, test_rows, t) if test_rows else np.zeros(0)
        truth = np.array([getattr(r, t) for r in test_rows])
        cells = {}
        for gt in types:
            for p in pids:
                sel = [i for i, r in enumerate(test_rows) if r.graph_type == gt and r.partitioner_id == p]
                cells[(gt, p)] = mape(truth[sel], preds[sel]) if sel else None
        out[t] = Heatmap(t, types, pids, cells)
    return out


def props_from_row(r) -> GraphProperties:
    level = FeatureLevel.ADVANCED if getattr(r, "avg_lcc", None) is not None else FeatureLevel.BASIC
    return GraphProperties(
        r.num_edges, r.num_vertices, level, r.mean_degree, r.density, r.indeg_skew, r.outdeg_skew,
        getattr(r, "avg_triangles", None), getattr(r, "avg_lcc", None),
    )


def predict_quality_rows(suite: PredictorSuite, rows: Sequence[QualityRow], target: str) -> np.ndarray:
    """Batch prediction for one quality target (same clamping as :func:`predict_quality`)."""
    rows = list(rows)
    m = suite.quality[target]
    for r in rows:
        _check_partitioner(suite, r.partitioner_id)
    X = FeatureMatrix.from_records(rows, m.columns, categorical_of(m.columns))
    pred = np.maximum(m.predict(X), 1.0)
    if target == "rf":
        pred = np.minimum(pred, np.array([r.k for r in rows], np.float64))
    return pred

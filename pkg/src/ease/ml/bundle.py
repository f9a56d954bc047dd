from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import SCHEMA_VERSION, __version__
from .features import FeatureMatrix, Preprocessor
from .models import REGRESSORS, ModelError, ModelSpec, RandomForest, make_regressor
from .trees import impurity_decrease

MIN_ROWS = 10


@dataclass(frozen=True, eq=False)
class ModelBundle:
    spec: ModelSpec
    preprocessor: Preprocessor
    regressor: object
    target: str = ""
    feature_level: str = ""
    seed: int = 0
    schema_version: int = SCHEMA_VERSION

    def predict(self, X: FeatureMatrix) -> np.ndarray:
        Z = self.preprocessor.transform(X, self.regressor.standardize)
        return np.asarray(self.regressor.predict(Z), np.float64)

    @property
    def columns(self) -> tuple:
        return self.preprocessor.columns

    def to_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "schema_version": self.schema_version,
            "seed": self.seed,
            "target": self.target,
            "feature_level": self.feature_level,
            "spec": self.spec.to_dict(),
            "preprocessor": self.preprocessor.to_dict(),
            "regressor": self.regressor.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelBundle":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ModelError(f"model schema_version {d.get('schema_version')} != {SCHEMA_VERSION}")
        spec = ModelSpec.from_dict(d["spec"])
        return cls(
            spec,
            Preprocessor.from_dict(d["preprocessor"]),
            REGRESSORS[spec.family].from_dict(d["regressor"]),
            d.get("target", ""),
            d.get("feature_level", ""),
            int(d.get("seed", 0)),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "ModelBundle":
        return cls.from_dict(json.loads(Path(path).read_text()))


def fit(spec: ModelSpec, X: FeatureMatrix, y, seed: int = 0, target: str = "", feature_level: str = "") -> ModelBundle:
    y = np.asarray(y, np.float64)
    if X.rows < MIN_ROWS:
        raise ModelError(f"need at least {MIN_ROWS} rows, got {X.rows}")
    if y.size != X.rows:
        raise ModelError("y length differs from the row count")
    if not np.all(np.isfinite(y)):
        raise ModelError("targets must be finite")
    pre = Preprocessor.fit(X)
    reg = make_regressor(spec)
    reg.fit(pre.transform(X, reg.standardize), y, seed)
    return ModelBundle(spec, pre, reg, target, feature_level, seed)


def feature_importance(m: ModelBundle) -> dict[str, float]:
    """Mean MSE decrease per encoded column, averaged over trees, normalized to sum 1."""
    if not isinstance(m.regressor, RandomForest):
        raise ModelError("feature importance is defined for random_forest models only")
    names = m.preprocessor.encoded_names
    total = np.zeros(len(names))
    for t in m.regressor.trees:
        total += impurity_decrease(t, len(names))
    total /= max(len(m.regressor.trees), 1)
    s = total.sum()
    if s > 0:
        total = total / s
    return dict(zip(names, total.tolist()))


def group_importance(m: ModelBundle, importance: dict[str, float]) -> dict[str, float]:
    """Sum encoded-column importances back onto their source columns."""
    out: dict[str, float] = {}
    for name, src in zip(m.preprocessor.encoded_names, m.preprocessor.source_of()):
        out[src] = out.get(src, 0.0) + importance[name]
    return out

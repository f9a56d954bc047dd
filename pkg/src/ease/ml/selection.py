from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundle import ModelBundle, fit
from .features import FeatureMatrix
from .metrics import mape, rmse
from .models import ModelSpec


def _grid(family, **axes):
    names = list(axes)
    out = [{}]
    for n in names:
        out = [dict(o, **{n: v}) for o in out for v in axes[n]]
    return [ModelSpec.make(family, **o) for o in out]


DEFAULT_GRID: tuple = tuple(
    _grid("knn", k_nn=[3, 5, 9])
    + _grid("polyridge", degree=[1, 2, 3], lam=[1e-3, 1e-1, 1.0])
    + _grid("random_forest", n_trees=[100, 300], max_depth=[None, 10, 20])
    + _grid("gbt", n_trees=[200, 500], rate=[0.05, 0.1], depth=[3, 6])
)

# a cheaper grid with the same families, for desk-scale pipelines
FAST_GRID: tuple = tuple(
    _grid("knn", k_nn=[3, 5])
    + _grid("polyridge", degree=[1, 2], lam=[1e-3, 1e-1])
    + _grid("random_forest", n_trees=[50], max_depth=[None, 10])
    + _grid("gbt", n_trees=[100], rate=[0.1], depth=[3, 6])
)

GRIDS = {"default": DEFAULT_GRID, "fast": FAST_GRID}


def family_grid(family: str, grid=DEFAULT_GRID) -> tuple:
    return tuple(s for s in grid if s.family == family)


def fold_indices(rows: int, folds: int, seed: int) -> list[np.ndarray]:
    perm = np.random.default_rng(seed).permutation(rows)
    return [np.sort(f) for f in np.array_split(perm, folds)]


@dataclass(frozen=True)
class CVResult:
    spec: ModelSpec
    fold_mape: tuple
    fold_rmse: tuple

    @property
    def mean_mape(self) -> float:
        return float(np.mean(self.fold_mape))

    @property
    def mean_rmse(self) -> float:
        return float(np.mean(self.fold_rmse))


def cross_validate(spec: ModelSpec, X: FeatureMatrix, y, folds: int = 5, seed: int = 0) -> CVResult:
    """k-fold CV; preprocessing is refit inside every fold on its training split."""
    y = np.asarray(y, np.float64)
    if X.rows < folds:
        raise ValueError(f"need at least {folds} rows for {folds}-fold CV")
    m_scores, r_scores = [], []
    all_idx = np.arange(X.rows)
    for test in fold_indices(X.rows, folds, seed):
        train = np.setdiff1d(all_idx, test)
        b = fit(spec, X.take(train), y[train], seed)
        pred = b.predict(X.take(test))
        m_scores.append(mape(y[test], pred))
        r_scores.append(rmse(y[test], pred))
    return CVResult(spec, tuple(m_scores), tuple(r_scores))


@dataclass(frozen=True, eq=False)
class GridResult:
    best: ModelSpec
    model: ModelBundle
    table: tuple  # CVResult per spec, in grid order

    def rows(self) -> list[dict]:
        """One record per (spec, fold)."""
        out = []
        for r in self.table:
            for f, (mp, rm) in enumerate(zip(r.fold_mape, r.fold_rmse)):
                out.append({"spec": r.spec.label, "fold": f, "mape": mp, "rmse": rm})
        return out


def grid_search(specs, X: FeatureMatrix, y, folds: int = 5, seed: int = 0, target: str = "", feature_level: str = "") -> GridResult:
    """Lowest mean CV MAPE wins (first in grid order on ties); it is refit on all rows."""
    specs = list(specs)
    if not specs:
        raise ValueError("empty grid")
    table = tuple(cross_validate(s, X, y, folds, seed) for s in specs)
    best = min(range(len(table)), key=lambda i: (table[i].mean_mape, i))
    model = fit(specs[best], X, y, seed, target, feature_level)
    return GridResult(specs[best], model, table)

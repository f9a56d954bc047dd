from .bundle import ModelBundle, feature_importance, fit, group_importance
from .features import FeatureError, FeatureMatrix, Preprocessor
from .metrics import EPS, mape, rmse
from .models import FAMILIES, GradientBoosting, KNN, ModelError, ModelSpec, PolyRidge, RandomForest, poly_expand, poly_terms
from .selection import (
    DEFAULT_GRID,
    FAST_GRID,
    GRIDS,
    CVResult,
    GridResult,
    cross_validate,
    family_grid,
    fold_indices,
    grid_search,
)
from .trees import TreeArrays

__all__ = [
    "ModelBundle",
    "feature_importance",
    "fit",
    "group_importance",
    "FeatureError",
    "FeatureMatrix",
    "Preprocessor",
    "EPS",
    "mape",
    "rmse",
    "FAMILIES",
    "GradientBoosting",
    "KNN",
    "ModelError",
    "ModelSpec",
    "PolyRidge",
    "RandomForest",
    "poly_expand",
    "poly_terms",
    "DEFAULT_GRID",
    "FAST_GRID",
    "GRIDS",
    "CVResult",
    "GridResult",
    "cross_validate",
    "family_grid",
    "fold_indices",
    "grid_search",
    "TreeArrays",
]

"""Which columns feed which predictor, per feature level."""

from __future__ import annotations

from ..graph import FeatureLevel
from ..ml import FeatureError

SIMPLE_PROPS = ("num_edges", "num_vertices")
BASIC_PROPS = ("mean_degree", "density", "indeg_skew", "outdeg_skew")
ADVANCED_PROPS = ("avg_triangles", "avg_lcc")
QUALITY_METRICS = ("rf", "b_edge", "b_v", "b_src", "b_dst")
PARTITIONER = "partitioner_id"


def quality_columns(target: str, level) -> tuple:
    """Balance targets never use the advanced properties; rf does at the advanced level."""
    level = FeatureLevel(level)
    if level is FeatureLevel.SIMPLE:
        props = SIMPLE_PROPS
    elif level is FeatureLevel.ADVANCED and target == "rf":
        props = BASIC_PROPS + ADVANCED_PROPS
    else:
        props = BASIC_PROPS
    return props + ("k", PARTITIONER)


def quality_level(target: str, level) -> str:
    level = FeatureLevel(level)
    if level is FeatureLevel.ADVANCED and target != "rf":
        return FeatureLevel.BASIC.value
    return level.value


def partition_time_columns(level) -> tuple:
    level = FeatureLevel(level)
    props = SIMPLE_PROPS if level is FeatureLevel.SIMPLE else SIMPLE_PROPS + BASIC_PROPS
    return props + (PARTITIONER,)


PROCESSING_COLUMNS = SIMPLE_PROPS + QUALITY_METRICS + ("iterations",)


def columns_for(target: str, level) -> tuple:
    """Feature columns for a dataset target column."""
    if target in QUALITY_METRICS:
        return quality_columns(target, level)
    if target == "partition_time_ms":
        return partition_time_columns(level)
    if target in ("target", "cost_total"):
        return PROCESSING_COLUMNS
    raise FeatureError(f"no feature set defined for target {target!r}")


def categorical_of(columns) -> tuple:
    return tuple(c for c in columns if c == PARTITIONER)

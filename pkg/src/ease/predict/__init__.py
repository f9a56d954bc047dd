from .features import (
    ADVANCED_PROPS,
    BASIC_PROPS,
    PROCESSING_COLUMNS,
    QUALITY_METRICS,
    SIMPLE_PROPS,
    columns_for,
    partition_time_columns,
    quality_columns,
)
from .suite import (
    COMPONENTS,
    MODEL_CHOICES,
    Heatmap,
    PredictError,
    PredictorSuite,
    enrich_and_retrain,
    error_heatmap,
    is_fixed_iteration,
    predict_partition_time,
    predict_processing_time,
    predict_quality,
    predict_quality_rows,
    props_from_row,
    train_suite,
    train_target,
)

__all__ = [
    "ADVANCED_PROPS",
    "BASIC_PROPS",
    "PROCESSING_COLUMNS",
    "QUALITY_METRICS",
    "SIMPLE_PROPS",
    "columns_for",
    "partition_time_columns",
    "quality_columns",
    "COMPONENTS",
    "MODEL_CHOICES",
    "Heatmap",
    "PredictError",
    "PredictorSuite",
    "enrich_and_retrain",
    "error_heatmap",
    "is_fixed_iteration",
    "predict_partition_time",
    "predict_processing_time",
    "predict_quality",
    "predict_quality_rows",
    "props_from_row",
    "train_suite",
    "train_target",
]

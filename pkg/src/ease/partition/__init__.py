from .core import (
    CAPACITY_ENFORCED,
    DEFAULT_ALPHA,
    MS_PER_OP,
    PARTITIONERS,
    CapacityError,
    PartitionError,
    Partitioning,
    grid_shape,
    partition,
    registered_partitioners,
)
from .quality import QualityMetrics, compute_quality, cover_sizes, quality_from_assignment

__all__ = [
    "CAPACITY_ENFORCED",
    "DEFAULT_ALPHA",
    "MS_PER_OP",
    "PARTITIONERS",
    "CapacityError",
    "PartitionError",
    "Partitioning",
    "grid_shape",
    "partition",
    "registered_partitioners",
    "QualityMetrics",
    "compute_quality",
    "cover_sizes",
    "quality_from_assignment",
]

from .build import (
    DEFAULT_KS,
    DEFAULT_RUNTIME_K,
    DatasetResult,
    build_datasets,
    build_quality_dataset,
    build_runtime_dataset,
    cell_seed,
    default_jobs,
    split_graphs,
    workload_seed,
)
from .schema import (
    QUALITY_TARGETS,
    QualityRow,
    RuntimeRow,
    SchemaError,
    SkippedCell,
    read_rows,
    rows_to_csv,
    write_rows,
)
from .suite import InMemoryGraph, SuiteEntry, generate_suite, read_manifest, write_manifest

__all__ = [
    "DEFAULT_KS",
    "DEFAULT_RUNTIME_K",
    "DatasetResult",
    "build_datasets",
    "build_quality_dataset",
    "build_runtime_dataset",
    "cell_seed",
    "default_jobs",
    "split_graphs",
    "workload_seed",
    "QUALITY_TARGETS",
    "QualityRow",
    "RuntimeRow",
    "SchemaError",
    "SkippedCell",
    "read_rows",
    "rows_to_csv",
    "write_rows",
    "InMemoryGraph",
    "SuiteEntry",
    "generate_suite",
    "read_manifest",
    "write_manifest",
]

from .engine import run_workload
from .programs import DAMPING, kcore_threshold, output_digest, sssp_source
from .replicas import ReplicaTable, replica_table, replication_message_volume
from .trace import WorkloadTrace, trace_cost, trace_workload
from .workload import (
    ALGORITHMS,
    DEFAULT_WORKLOADS,
    FIXED_ITERATION,
    STANDARD_WORKLOADS,
    CostModel,
    ProcessingResult,
    SimulationError,
    WorkloadSpec,
    assemble_result,
    workload_from_name,
)

__all__ = [
    "run_workload",
    "DAMPING",
    "kcore_threshold",
    "output_digest",
    "sssp_source",
    "ReplicaTable",
    "replica_table",
    "replication_message_volume",
    "WorkloadTrace",
    "trace_cost",
    "trace_workload",
    "ALGORITHMS",
    "DEFAULT_WORKLOADS",
    "FIXED_ITERATION",
    "STANDARD_WORKLOADS",
    "CostModel",
    "ProcessingResult",
    "SimulationError",
    "WorkloadSpec",
    "assemble_result",
    "workload_from_name",
]

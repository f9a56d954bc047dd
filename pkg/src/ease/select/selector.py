from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from ..graph import GraphProperties
from ..predict import (
    PredictError,
    PredictorSuite,
    predict_partition_time,
    predict_processing_time,
    predict_quality,
)

GOALS = ("end_to_end", "processing")
_GOAL_ALIASES = {"e2e": "end_to_end", "end_to_end": "end_to_end", "processing": "processing", "pro": "processing"}


def normalize_goal(goal: str) -> str:
    try:
        return _GOAL_ALIASES[goal]
    except KeyError:
        raise PredictError(f"unknown goal {goal!r}; expected e2e or processing") from None


@dataclass(frozen=True)
class CandidateRow:
    partitioner_id: str
    predicted_partition_time: float
    predicted_processing: float
    predicted_objective: float


@dataclass(frozen=True)
class SelectionReport:
    goal: str
    rows: tuple
    chosen: str
    props: GraphProperties
    k: int
    workload: str
    iterations: Optional[int]

    def to_dict(self) -> dict:
        return {
            "goal": self.goal,
            "chosen": self.chosen,
            "k": self.k,
            "workload": self.workload,
            "iterations": self.iterations,
            "props": self.props.to_dict(),
            "rows": [asdict(r) for r in self.rows],
        }


def argmin_objective(objectives: dict) -> str:
    """Smallest objective; ties go to the lexicographically smallest id."""
    return min(objectives, key=lambda p: (objectives[p], p))


def select_partitioner(
    suite: PredictorSuite,
    props: GraphProperties,
    k: int,
    workload: str,
    goal: str = "end_to_end",
    iterations: Optional[int] = None,
    partitioners: Optional[Sequence[str]] = None,
) -> SelectionReport:
    """Rank partitioners by predicted processing time, plus predicted partitioning
    time when the goal is end-to-end. Both are in milliseconds."""
    goal = normalize_goal(goal)
    if workload not in suite.processing_time:
        raise PredictError(f"suite does not cover workload {workload!r}")
    pids = sorted(partitioners) if partitioners is not None else list(suite.partitioners)
    rows = []
    for pid in pids:
        q = predict_quality(suite, props, pid, k)
        proc = suite.cost_model.to_ms(predict_processing_time(suite, workload, props, q, iterations))
        part = predict_partition_time(suite, props, pid) if goal == "end_to_end" else 0.0
        obj = proc + part if goal == "end_to_end" else proc
        rows.append(CandidateRow(pid, part, proc, obj))
    chosen = argmin_objective({r.partitioner_id: r.predicted_objective for r in rows})
    return SelectionReport(goal, tuple(rows), chosen, props, k, workload, iterations)

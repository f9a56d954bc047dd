from .evaluate import (
    STRATEGIES,
    StrategyCell,
    StrategyComparison,
    evaluate_from_rows,
    evaluate_strategies,
    render_cells_csv,
    render_csv,
    render_table,
    true_objective,
)
from .selector import GOALS, CandidateRow, SelectionReport, argmin_objective, normalize_goal, select_partitioner

__all__ = [
    "STRATEGIES",
    "StrategyCell",
    "StrategyComparison",
    "evaluate_from_rows",
    "evaluate_strategies",
    "render_cells_csv",
    "render_csv",
    "render_table",
    "true_objective",
    "GOALS",
    "CandidateRow",
    "SelectionReport",
    "argmin_objective",
    "normalize_goal",
    "select_partitioner",
]

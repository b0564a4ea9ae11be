"""
Partition Optimizer Module.

Transfer quotients and the metaconflict solver.
"""

from src.optimizer.engine import LocalSearch, MetaconflictSolver, solve
from src.optimizer.transfer import (
    IMPROVEMENT_THRESHOLD,
    PartitionState,
    SubsetState,
    TransferOutcome,
    best_transfer,
    conflict_after_removal,
    conflict_increase,
    conflicting_mass,
    evaluate_evidence,
    evaluate_transfers,
    is_local_optimum,
    masses_without,
    rho,
    select_transfer,
)

__all__ = [
    "IMPROVEMENT_THRESHOLD",
    "LocalSearch",
    "MetaconflictSolver",
    "PartitionState",
    "SubsetState",
    "TransferOutcome",
    "best_transfer",
    "conflict_after_removal",
    "conflict_increase",
    "conflicting_mass",
    "evaluate_evidence",
    "evaluate_transfers",
    "is_local_optimum",
    "masses_without",
    "rho",
    "select_transfer",
    "solve",
]

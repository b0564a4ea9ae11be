"""
Oracle Module.

Exhaustive partition enumeration and definition-level conflict, used to
check the solver on small corpora.
"""

from src.oracle.enumeration import PartitionEnumerator, stirling2
from src.oracle.exhaustive import (
    OracleTooLargeError,
    brute_force_min_mcf,
    conflict_by_enumeration,
    enumerated_subset_conflicts,
)

__all__ = [
    "OracleTooLargeError",
    "PartitionEnumerator",
    "brute_force_min_mcf",
    "conflict_by_enumeration",
    "enumerated_subset_conflicts",
    "stirling2",
]

"""
Metaconflict Criterion Module.

Scores partitions of evidences and provides the bounds used to prune the
search over the number of subsets.
"""

from src.criterion.bounds import domain_bound_excludes, fewer_subsets_dominated, stability_margin
from src.criterion.metaconflict import (
    PartitionError,
    combine_conflicts,
    domain_conflict,
    member_evidences,
    metaconflict,
    plausibility,
    score_partition,
    subset_conflicts,
)

__all__ = [
    "PartitionError",
    "combine_conflicts",
    "domain_bound_excludes",
    "domain_conflict",
    "fewer_subsets_dominated",
    "member_evidences",
    "metaconflict",
    "plausibility",
    "score_partition",
    "stability_margin",
    "subset_conflicts",
]

"""
Bounds and stability checks on the metaconflict.

- A count j whose domain conflict alone exceeds an achieved metaconflict
  can never do better and is excluded from the search.
- A count j below r with strictly less prior mass than r is dominated:
  its best partition is worse than the best partition with r subsets.
- A partition is stable when splitting any evidence off into a fresh
  subset raises the metaconflict.
"""

from collections.abc import Sequence

from src.belief import Evidence
from src.criterion.metaconflict import domain_conflict, metaconflict
from src.models import DomainDistribution, Partition, PartitionStability, StabilityMargin


def domain_bound_excludes(dist: DomainDistribution, j: int, best_mcf: float) -> bool:
    """True when no partition into ``j`` subsets can beat ``best_mcf``."""
    return domain_conflict(dist, j) > best_mcf


def fewer_subsets_dominated(dist: DomainDistribution, j: int, r: int) -> bool:
    """True when ``j < r`` and the prior strictly prefers ``r`` over ``j``."""
    return j < r and dist.mass(j) < dist.mass(r)


def stability_margin(
    partition: Partition, evidences: Sequence[Evidence], dist: DomainDistribution
) -> PartitionStability:
    """
    Signed change of metaconflict for every possible split.

    Each evidence in a subset with at least two members is moved, on its
    own, into a new subset r + 1 and the metaconflict is recomputed.
    Members of singleton subsets are not evaluated.
    """
    current = metaconflict(partition, evidences, dist)
    fresh = partition.subset_count + 1

    margins: list[StabilityMargin] = []
    for evidence in evidences:
        home = partition.assignment[evidence.id]
        if len(partition.members(home)) < 2:
            continue
        split = Partition(
            subset_count=fresh,
            assignment={**partition.assignment, evidence.id: fresh},
        )
        after = metaconflict(split, evidences, dist)
        margins.append(
            StabilityMargin(
                evidence_id=evidence.id,
                subset=home,
                metaconflict_after_split=after,
                margin=after - current,
            )
        )

    return PartitionStability(metaconflict=current, margins=tuple(margins))

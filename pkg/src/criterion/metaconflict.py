"""
Metaconflict of a partition.

A partition of the evidences into r subsets is argued against by two
sources: the prior mass on counts other than r (domain conflict) and the
conflict inside every subset. The metaconflict combines both:

    Mcf = 1 - (1 - c_0) * prod(1 - c_i)

and the plausibility of the partition is its complement.
"""

import math
from collections.abc import Iterable, Sequence

from src.belief import Evidence, subset_conflict
from src.models import DomainDistribution, Partition, PartitionScore


class PartitionError(ValueError):
    """Raised when a partition does not fit the evidences it is applied to."""


def domain_conflict(dist: DomainDistribution, r: int) -> float:
    """Prior mass on every count other than ``r``."""
    if r < 1:
        raise PartitionError(f"Number of subsets must be positive, got {r}")
    return min(1.0, max(0.0, 1.0 - dist.mass(r)))


def combine_conflicts(c0: float, conflicts: Iterable[float]) -> float:
    """Metaconflict from its parts."""
    # Rounding can push an accumulated conflict a few ulps past 1
    survival = (1.0 - c0) * math.prod(max(0.0, 1.0 - c) for c in conflicts)
    return min(1.0, max(0.0, 1.0 - survival))


def member_evidences(partition: Partition, evidences: Sequence[Evidence]) -> list[list[Evidence]]:
    """
    Evidences of every subset, in corpus order.

    Raises:
        PartitionError: If the partition does not cover exactly these evidences.
    """
    ids = [e.id for e in evidences]
    if set(ids) != set(partition.assignment) or len(ids) != len(partition.assignment):
        missing = sorted(set(ids) - set(partition.assignment))
        extra = sorted(set(partition.assignment) - set(ids))
        raise PartitionError(f"Partition does not match evidences (missing {missing}, unknown {extra})")

    blocks: list[list[Evidence]] = [[] for _ in range(partition.subset_count)]
    for evidence in evidences:
        blocks[partition.assignment[evidence.id] - 1].append(evidence)
    return blocks


def subset_conflicts(partition: Partition, evidences: Sequence[Evidence]) -> tuple[float, ...]:
    return tuple(subset_conflict(block) for block in member_evidences(partition, evidences))


def metaconflict(
    partition: Partition, evidences: Sequence[Evidence], dist: DomainDistribution
) -> float:
    """Metaconflict of ``partition`` over ``evidences`` under the prior ``dist``."""
    c0 = domain_conflict(dist, partition.subset_count)
    return combine_conflicts(c0, subset_conflicts(partition, evidences))


def plausibility(
    partition: Partition, evidences: Sequence[Evidence], dist: DomainDistribution
) -> float:
    return 1.0 - metaconflict(partition, evidences, dist)


def score_partition(
    partition: Partition, evidences: Sequence[Evidence], dist: DomainDistribution
) -> PartitionScore:
    """Full breakdown: domain conflict, subset conflicts, metaconflict, plausibility."""
    c0 = domain_conflict(dist, partition.subset_count)
    conflicts = subset_conflicts(partition, evidences)
    mcf = combine_conflicts(c0, conflicts)
    return PartitionScore(
        domain_conflict=c0,
        subset_conflicts=conflicts,
        metaconflict=mcf,
        plausibility=1.0 - mcf,
    )

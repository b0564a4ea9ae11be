"""
Exhaustive reference computations.

Both functions follow the definitions directly and stay deliberately
plain: they exist to check the fast paths, not to compete with them.
"""

import itertools
import logging
import math
from collections.abc import Iterator, Sequence

from src.belief import CombinationError, Evidence, subset_conflict
from src.criterion import combine_conflicts, domain_conflict
from src.models import DomainDistribution, OracleResult, Partition
from src.oracle.enumeration import PartitionEnumerator

logger = logging.getLogger(__name__)

DEFAULT_MAX_EVIDENCES = 10
DEFAULT_MAX_SELECTIONS = 10_000_000


class OracleTooLargeError(ValueError):
    """Raised when an exhaustive computation would exceed its size cap."""

    def __init__(self, what: str, limit: int, requested: int):
        self.limit = limit
        self.requested = requested
        super().__init__(f"Exhaustive {what} limited to {limit}, got {requested}")


def conflict_by_enumeration(
    evidences: Sequence[Evidence], max_selections: int = DEFAULT_MAX_SELECTIONS
) -> float:
    """
    Conflict from the definition: total mass of all selections of one focal
    per evidence whose overall intersection is empty.

    Raises:
        CombinationError: If ``evidences`` is empty.
        OracleTooLargeError: If there are more than ``max_selections`` selections.
    """
    if not evidences:
        raise CombinationError("Subset conflict is undefined for an empty subset")
    selections = math.prod(len(e.focals) for e in evidences)
    if selections > max_selections:
        raise OracleTooLargeError("selection space", max_selections, selections)

    frame = evidences[0].frame
    conflicting: list[float] = []
    for selection in itertools.product(*(e.focals for e in evidences)):
        actions, events = frame.action_mask, frame.event_mask
        product = 1.0
        for focal, mass in selection:
            actions &= focal.actions
            events &= focal.events
            product *= mass
        if actions == 0 or events == 0:
            conflicting.append(product)
    return math.fsum(conflicting)


def enumerated_subset_conflicts(
    partition: Partition,
    evidences: Sequence[Evidence],
    max_selections: int = DEFAULT_MAX_SELECTIONS,
) -> tuple[float, ...]:
    """Conflict of every subset of ``partition`` by enumeration, in subset order."""
    by_id = {e.id: e for e in evidences}
    return tuple(
        conflict_by_enumeration([by_id[i] for i in partition.members(k)], max_selections)
        for k in range(1, partition.subset_count + 1)
    )


def brute_force_min_mcf(
    evidences: Sequence[Evidence],
    dist: DomainDistribution,
    r: int | None = None,
    max_evidences: int = DEFAULT_MAX_EVIDENCES,
) -> OracleResult:
    """
    Minimum metaconflict over every partition of the evidences.

    Counts are tried in increasing order and codes in lexicographic order;
    the first partition reaching the minimum wins.

    Args:
        evidences: Evidences in corpus order.
        dist: Prior over the number of events.
        r: Restrict the search to exactly ``r`` subsets.
        max_evidences: Size cap.

    Raises:
        OracleTooLargeError: If there are more than ``max_evidences`` evidences.
        ValueError: If ``evidences`` is empty or ``r`` is out of range.
    """
    n = len(evidences)
    if n > max_evidences:
        raise OracleTooLargeError("partition search", max_evidences, n)
    if n == 0:
        raise ValueError("At least one evidence is required")

    cache: dict[int, float] = {}

    def conflict_of(members: int) -> float:
        if members not in cache:
            cache[members] = subset_conflict([e for k, e in enumerate(evidences) if members >> k & 1])
        return cache[members]

    counts = range(1, n + 1) if r is None else (r,)
    enumerators = {count: PartitionEnumerator(n, count) for count in counts}
    minima: dict[int, float] = {}

    def scored() -> Iterator[tuple[float, tuple[int, ...]]]:
        for count, enumerator in enumerators.items():
            c0 = domain_conflict(dist, count)
            for code in enumerator:
                masks = [0] * count
                for k, label in enumerate(code):
                    masks[label] |= 1 << k
                mcf = combine_conflicts(c0, (conflict_of(mask) for mask in masks))
                minima[count] = min(mcf, minima.get(count, math.inf))
                yield mcf, code

    # min() returns the first of equal values
    best_mcf, best_code = min(scored(), key=lambda pair: pair[0])
    examined = sum(len(enumerator) for enumerator in enumerators.values())
    logger.debug("Oracle examined %d partitions of %d evidences", examined, n)
    partition = Partition(
        subset_count=max(best_code) + 1,
        assignment={e.id: label + 1 for e, label in zip(evidences, best_code, strict=True)},
    )
    return OracleResult(
        partition=partition,
        metaconflict=best_mcf,
        minima_by_count=minima,
        partitions_examined=examined,
    )

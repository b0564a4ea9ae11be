"""
Incremental transfer arithmetic.

Moving an evidence q from its home subset i to a subset j changes only
c_i and c_j. With m* the combination of subset i without q,

    c_i* = c_i - delta,    delta = sum of m*(A) * m_q(B) over empty A ∩ B
    c_j* = c_j + gain,     gain  = sum of m_j(A) * m_q(B) over empty A ∩ B

and since 1 - c_i = (1 - c_i*)(1 - rho_i) and 1 - c_j* = (1 - c_j)(1 - rho_j)
the move lowers the metaconflict exactly when rho_j < rho_i, where

    rho_i = delta / (1 - c_i*)     (home quotient)
    rho_j = gain / (1 - c_j)       (foreign quotient)
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from src.belief import CombinedState, Evidence, combine, fold, intersect
from src.criterion import PartitionError, combine_conflicts, domain_conflict, member_evidences
from src.models import DomainDistribution, Partition, TransferEvaluation

logger = logging.getLogger(__name__)

IMPROVEMENT_THRESHOLD = 1e-12


# ==============================================================================
# Subset and Partition State
# ==============================================================================


@dataclass(frozen=True, slots=True)
class SubsetState:
    """Members of one subset (corpus order) with their combined masses."""

    members: tuple[Evidence, ...]
    combined: CombinedState

    @classmethod
    def of(cls, members: Sequence[Evidence]) -> "SubsetState":
        if not members:
            raise PartitionError("A subset needs at least one evidence")
        return cls(tuple(members), fold(members))

    @property
    def conflict(self) -> float:
        return self.combined.conflict

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.members)

    def __contains__(self, evidence_id: object) -> bool:
        return evidence_id in self.ids

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True, slots=True)
class TransferOutcome:
    """Conflicts after a move, closed form next to recomputed."""

    evidence_id: str
    source: int
    target: int
    source_conflict: float
    target_conflict: float
    closed_form_source: float
    closed_form_target: float


class PartitionState:
    """
    Mutable working partition: one SubsetState per subset, numbered from 1.

    Only the solver that created it mutates it.
    """

    def __init__(self, evidences: Sequence[Evidence], subsets: Sequence[SubsetState]):
        self.evidences = tuple(evidences)
        self.subsets = list(subsets)
        self._order = {e.id: index for index, e in enumerate(self.evidences)}

    @classmethod
    def from_partition(cls, partition: Partition, evidences: Sequence[Evidence]) -> "PartitionState":
        blocks = member_evidences(partition, evidences)
        return cls(evidences, [SubsetState.of(block) for block in blocks])

    @classmethod
    def single(cls, evidences: Sequence[Evidence]) -> "PartitionState":
        """Every evidence in subset 1."""
        return cls(evidences, [SubsetState.of(evidences)])

    @property
    def subset_count(self) -> int:
        return len(self.subsets)

    def subset(self, index: int) -> SubsetState:
        return self.subsets[index - 1]

    def evidence(self, evidence_id: str) -> Evidence:
        return self.evidences[self._index(evidence_id)]

    def home_of(self, evidence_id: str) -> int:
        self._index(evidence_id)
        for index, subset in enumerate(self.subsets, start=1):
            if evidence_id in subset:
                return index
        raise PartitionError(f"Evidence {evidence_id!r} is not assigned to any subset")

    def conflicts(self) -> tuple[float, ...]:
        return tuple(subset.conflict for subset in self.subsets)

    def metaconflict(self, dist: DomainDistribution) -> float:
        return combine_conflicts(domain_conflict(dist, self.subset_count), self.conflicts())

    def to_partition(self) -> Partition:
        assignment = {e.id: self.home_of(e.id) for e in self.evidences}
        return Partition(subset_count=self.subset_count, assignment=assignment)

    def blocks(self) -> tuple[tuple[str, ...], ...]:
        return tuple(subset.ids for subset in self.subsets)

    def move(self, evidence_id: str, target: int) -> TransferOutcome:
        """
        Move an evidence to ``target``; ``subset_count + 1`` opens a new subset.

        The home subset is refolded without the evidence and the evidence is
        combined into the target incrementally.

        Raises:
            PartitionError: If the move would empty the home subset or the
                target does not exist.
        """
        source = self.home_of(evidence_id)
        if not 1 <= target <= self.subset_count + 1 or target == source:
            raise PartitionError(f"Cannot move {evidence_id!r} from subset {source} to {target}")
        home = self.subset(source)
        if len(home) < 2:
            raise PartitionError(f"Moving {evidence_id!r} would empty subset {source}")

        evidence = self.evidence(evidence_id)
        remaining = masses_without(home, evidence_id)
        if target > self.subset_count:
            receiving = CombinedState.unit(evidence.frame)
            self.subsets.append(SubsetState((), receiving))
        else:
            receiving = self.subset(target).combined

        closed_source = conflict_after_removal(home.conflict, conflicting_mass(evidence, remaining))
        closed_target = conflict_increase(receiving.conflict, conflicting_mass(evidence, receiving))

        self.subsets[source - 1] = SubsetState(
            tuple(e for e in home.members if e.id != evidence_id), remaining
        )
        joined = self._in_corpus_order((*self.subset(target).members, evidence))
        self.subsets[target - 1] = SubsetState(joined, combine(receiving, evidence))

        outcome = TransferOutcome(
            evidence_id=evidence_id,
            source=source,
            target=target,
            source_conflict=self.subset(source).conflict,
            target_conflict=self.subset(target).conflict,
            closed_form_source=closed_source,
            closed_form_target=closed_target,
        )
        logger.debug(
            "Moved %s from subset %d to %d (c=%.9f, %.9f)",
            evidence_id,
            source,
            target,
            outcome.source_conflict,
            outcome.target_conflict,
        )
        return outcome

    def _index(self, evidence_id: str) -> int:
        try:
            return self._order[evidence_id]
        except KeyError as e:
            raise PartitionError(f"Unknown evidence {evidence_id!r}") from e

    def _in_corpus_order(self, members: Sequence[Evidence]) -> tuple[Evidence, ...]:
        return tuple(sorted(members, key=lambda e: self._order[e.id]))


# ==============================================================================
# Quotients
# ==============================================================================


def conflicting_mass(evidence: Evidence, state: CombinedState) -> float:
    """Mass that would fall on the empty set if ``evidence`` joined ``state``."""
    return math.fsum(
        mass * other_mass
        for focal, mass in state.focals
        for other, other_mass in evidence.focals
        if intersect(focal, other).is_empty
    )


def conflict_after_removal(conflict: float, delta: float) -> float:
    return conflict - delta


def conflict_increase(conflict: float, gain: float) -> float:
    return conflict + gain


def masses_without(subset: SubsetState, evidence_id: str) -> CombinedState:
    """
    Combined state of a subset as if ``evidence_id`` had never joined it.

    Refolds the remaining members from scratch; removing the only member
    gives the unit state.

    Raises:
        PartitionError: If the evidence is not a member.
    """
    if evidence_id not in subset:
        raise PartitionError(f"Evidence {evidence_id!r} is not a member of the subset")
    return fold((e for e in subset.members if e.id != evidence_id), subset.combined.frame)


def rho(evidence_id: str, target: int, state: PartitionState) -> float:
    """
    Quotient of ``evidence_id`` against subset ``target``.

    The home subset uses the removal quotient, any other subset the
    insertion quotient. A fully conflicting target yields 1; a home subset
    that is fully conflicting even without the evidence yields 0.
    """
    evidence = state.evidence(evidence_id)
    home = state.home_of(evidence_id)
    if target == home:
        remaining = masses_without(state.subset(home), evidence_id)
        denominator = 1.0 - remaining.conflict
        if denominator <= 0.0:
            return 0.0
        return min(1.0, conflicting_mass(evidence, remaining) / denominator)

    receiving = state.subset(target).combined
    denominator = 1.0 - receiving.conflict
    if denominator <= 0.0:
        return 1.0
    return min(1.0, conflicting_mass(evidence, receiving) / denominator)


def evaluate_evidence(
    evidence_id: str, state: PartitionState, threshold: float = IMPROVEMENT_THRESHOLD
) -> TransferEvaluation:
    """Quotients of one evidence against every subset and its preferred target."""
    home = state.home_of(evidence_id)
    quotients = tuple(rho(evidence_id, j, state) for j in range(1, state.subset_count + 1))

    best = min(range(len(quotients)), key=lambda j: (quotients[j], j)) + 1
    home_rho = quotients[home - 1]
    best_rho = quotients[best - 1]
    if best == home:
        ratio = 1.0
    elif home_rho >= 1.0:
        ratio = math.inf
    else:
        ratio = (1.0 - best_rho) / (1.0 - home_rho)

    return TransferEvaluation(
        evidence_id=evidence_id,
        home=home,
        quotients=quotients,
        best_target=best,
        ratio=ratio,
        favourable=best != home and best_rho < home_rho - threshold,
    )


def evaluate_transfers(
    state: PartitionState,
    threshold: float = IMPROVEMENT_THRESHOLD,
    workers: int = 1,
) -> tuple[TransferEvaluation, ...]:
    """
    Evaluate every transfer candidate, in corpus order.

    Candidates are evidences in subsets with at least two members. With
    ``workers > 1`` the quotient rows are computed on a thread pool; the
    result order does not depend on the pool.
    """
    candidates = [e.id for e in state.evidences if len(state.subset(state.home_of(e.id))) > 1]
    if state.subset_count < 2 or not candidates:
        return ()

    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return tuple(
                executor.map(lambda q: evaluate_evidence(q, state, threshold), candidates)
            )
    return tuple(evaluate_evidence(q, state, threshold) for q in candidates)


def select_transfer(evaluations: Sequence[TransferEvaluation]) -> TransferEvaluation | None:
    """Favourable evaluation with the largest ratio; ties keep the earliest."""
    chosen: TransferEvaluation | None = None
    for evaluation in evaluations:
        if not evaluation.favourable:
            continue
        if chosen is None or evaluation.ratio > chosen.ratio:
            chosen = evaluation
    return chosen


def best_transfer(
    state: PartitionState,
    threshold: float = IMPROVEMENT_THRESHOLD,
    workers: int = 1,
) -> tuple[str, int] | None:
    """The (evidence id, target subset) of the most favourable transfer, if any."""
    chosen = select_transfer(evaluate_transfers(state, threshold, workers))
    if chosen is None:
        return None
    return chosen.evidence_id, chosen.best_target


def is_local_optimum(
    partition: Partition,
    evidences: Sequence[Evidence],
    threshold: float = IMPROVEMENT_THRESHOLD,
) -> bool:
    """True when no single favourable transfer exists from ``partition``."""
    state = PartitionState.from_partition(partition, evidences)
    return best_transfer(state, threshold) is None

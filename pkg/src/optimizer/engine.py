"""
Metaconflict solver - the search orchestrator.

Visits candidate numbers of subsets in order of increasing domain
conflict, grows each starting partition from the previous answer and
hill-climbs it with single-evidence transfers. Counts that cannot beat the
best metaconflict found so far are pruned.
"""

import logging
import math
from collections.abc import Sequence
from typing import NamedTuple

from src.belief import Evidence
from src.belief.focal import same_frame
from src.config import Settings, get_settings
from src.criterion import (
    PartitionError,
    domain_bound_excludes,
    domain_conflict,
    fewer_subsets_dominated,
)
from src.models import (
    DomainDistribution,
    Partition,
    SolveResult,
    SubsetCountRun,
    TraceKind,
    TraceStep,
)
from src.optimizer.transfer import (
    PartitionState,
    evaluate_transfers,
    rho,
    select_transfer,
)

logger = logging.getLogger(__name__)


class LocalSearch(NamedTuple):
    """Result of hill-climbing for one number of subsets."""

    run: SubsetCountRun
    trace: tuple[TraceStep, ...]


class MetaconflictSolver:
    """
    Partitions evidences by minimizing the metaconflict.

    The answer is a local optimum of single transfers for every visited
    count; the count itself is chosen among the visited ones.
    """

    def __init__(self, settings: Settings | None = None):
        """
        Initialize the solver.

        Args:
            settings: Configuration settings. Uses global settings if not provided.
        """
        self._settings = settings or get_settings()

    @property
    def threshold(self) -> float:
        return self._settings.improvement_threshold

    # ==========================================================================
    # Search over subset counts
    # ==========================================================================

    def solve(self, evidences: Sequence[Evidence], dist: DomainDistribution) -> SolveResult:
        """
        Find the partition with the least metaconflict.

        Args:
            evidences: Evidences in corpus order.
            dist: Prior over the number of events.

        Returns:
            SolveResult with the answer, one run per visited count and the trace.

        Raises:
            PartitionError: If the input is empty or inconsistent.
        """
        self._check_inputs(evidences, dist)
        n = len(evidences)
        trace: list[TraceStep] = []

        counts = tuple(range(1, n + 1))
        trace.append(
            TraceStep(
                kind=TraceKind.DOMAIN_CONFLICTS,
                counts=counts,
                domain_conflicts=tuple(domain_conflict(dist, j) for j in counts),
            )
        )

        remaining = list(counts)
        visited: list[int] = []
        runs: list[SubsetCountRun] = []
        previous: Partition | None = None
        best_mcf = math.inf

        while remaining:
            r = min(remaining, key=lambda j: (domain_conflict(dist, j), j))
            discarded = [j for j in remaining if j < r]
            remaining = [j for j in remaining if j > r]
            visited.append(r)
            trace.append(
                TraceStep(
                    kind=TraceKind.SELECT_COUNT,
                    subset_count=r,
                    remaining=tuple(remaining),
                    visited=tuple(visited),
                    counts=tuple(discarded),
                )
            )
            ties = [j for j in discarded if not fewer_subsets_dominated(dist, j, r)]
            if ties:
                logger.warning("Discarded counts %s without a strictly smaller prior mass", ties)
                trace.append(
                    TraceStep(
                        kind=TraceKind.EQUAL_MASS_DISCARD,
                        subset_count=r,
                        counts=tuple(ties),
                    )
                )

            search = self._search_count(evidences, dist, r, previous, trace)
            runs.append(search.run)
            previous = search.run.partition
            best_mcf = min(best_mcf, search.run.metaconflict)
            logger.info("Visited r=%d: Mcf %.9f", r, search.run.metaconflict)

            pruned = [j for j in remaining if domain_bound_excludes(dist, j, best_mcf)]
            if pruned:
                remaining = [j for j in remaining if j not in pruned]
                logger.debug("Pruned counts %s against Mcf %.9f", pruned, best_mcf)
            trace.append(
                TraceStep(
                    kind=TraceKind.PRUNE,
                    counts=tuple(pruned),
                    remaining=tuple(remaining),
                    metaconflict=best_mcf,
                )
            )

        return self._answer(runs, trace)

    def solve_fixed(
        self, evidences: Sequence[Evidence], dist: DomainDistribution, r: int
    ) -> SolveResult:
        """
        Find a partition into exactly ``r`` subsets.

        Raises:
            PartitionError: If the input is inconsistent or ``r`` exceeds the evidence count.
        """
        self._check_inputs(evidences, dist)
        trace = [
            TraceStep(
                kind=TraceKind.SELECT_COUNT,
                subset_count=r,
                visited=(r,),
                note="fixed",
            )
        ]
        search = self._search_count(evidences, dist, r, None, trace)
        return self._answer([search.run], trace)

    # ==========================================================================
    # Per-count steps
    # ==========================================================================

    def initial_partition(
        self,
        evidences: Sequence[Evidence],
        r: int,
        previous: Partition | None = None,
    ) -> Partition:
        """
        Starting partition with ``r`` subsets.

        Starts from ``previous`` (or everything in one subset) and opens each
        missing subset with the evidence of largest home quotient.

        Raises:
            PartitionError: If ``r`` exceeds the evidence count or ``previous``
                already has more than ``r`` subsets.
        """
        state = self._seed(evidences, r, previous, [])
        return state.to_partition()

    def local_optimize(
        self,
        evidences: Sequence[Evidence],
        dist: DomainDistribution,
        initial: Partition,
    ) -> LocalSearch:
        """
        Apply the most favourable transfer until none is left.

        Every applied transfer strictly lowers the metaconflict. The search
        also stops after ``iteration_cap_factor * n**2`` transfers and flags
        the run as capped.
        """
        state = PartitionState.from_partition(initial, evidences)
        trace: list[TraceStep] = []
        run = self._climb(state, dist, trace)
        return LocalSearch(run=run, trace=tuple(trace))

    def _search_count(
        self,
        evidences: Sequence[Evidence],
        dist: DomainDistribution,
        r: int,
        previous: Partition | None,
        trace: list[TraceStep],
    ) -> LocalSearch:
        state = self._seed(evidences, r, previous, trace)
        trace.append(
            TraceStep(
                kind=TraceKind.INITIAL_PARTITION,
                subset_count=r,
                blocks=state.blocks(),
                subset_conflicts=state.conflicts(),
                metaconflict=state.metaconflict(dist),
            )
        )
        start = len(trace)
        run = self._climb(state, dist, trace)
        return LocalSearch(run=run, trace=tuple(trace[start:]))

    def _seed(
        self,
        evidences: Sequence[Evidence],
        r: int,
        previous: Partition | None,
        trace: list[TraceStep],
    ) -> PartitionState:
        if r < 1 or r > len(evidences):
            raise PartitionError(f"Cannot split {len(evidences)} evidences into {r} subsets")
        if previous is None:
            state = PartitionState.single(evidences)
        else:
            if previous.subset_count > r:
                raise PartitionError(
                    f"Previous partition has {previous.subset_count} subsets, more than {r}"
                )
            state = PartitionState.from_partition(previous, evidences)

        while state.subset_count < r:
            quotients = {
                e.id: rho(e.id, state.home_of(e.id), state)
                for e in state.evidences
                if len(state.subset(state.home_of(e.id))) > 1
            }
            # max() keeps the first of equal values, i.e. the lowest corpus index
            chosen = max(quotients, key=lambda q: quotients[q])
            source = state.home_of(chosen)
            state.move(chosen, state.subset_count + 1)
            trace.append(
                TraceStep(
                    kind=TraceKind.SEED_MOVE,
                    subset_count=r,
                    evidence_id=chosen,
                    source=source,
                    target=state.subset_count,
                    subset_conflicts=state.conflicts(),
                    note=f"home quotient {quotients[chosen]:.9f}",
                )
            )
        return state

    def _climb(
        self, state: PartitionState, dist: DomainDistribution, trace: list[TraceStep]
    ) -> SubsetCountRun:
        r = state.subset_count
        mcf = state.metaconflict(dist)
        if r == 1:
            trace.append(
                TraceStep(kind=TraceKind.SINGLE_SUBSET, subset_count=1, metaconflict=mcf)
            )
            return SubsetCountRun(
                subset_count=1, partition=state.to_partition(), metaconflict=mcf, transfers=0
            )

        n = len(state.evidences)
        cap = self._settings.iteration_cap_factor * n * n
        transfers = 0
        capped = False
        while True:
            evaluations = evaluate_transfers(state, self.threshold, self._settings.quotient_workers)
            chosen = select_transfer(evaluations)
            if chosen is None:
                trace.append(
                    TraceStep(
                        kind=TraceKind.NO_TRANSFER,
                        subset_count=r,
                        evaluations=evaluations,
                        metaconflict=mcf,
                    )
                )
                break
            if transfers >= cap:
                capped = True
                logger.warning("Local search for r=%d stopped after %d transfers", r, transfers)
                trace.append(
                    TraceStep(kind=TraceKind.ITERATION_CAP, subset_count=r, metaconflict=mcf)
                )
                break

            outcome = state.move(chosen.evidence_id, chosen.best_target)
            transfers += 1
            updated = state.metaconflict(dist)
            if updated >= mcf:
                logger.warning(
                    "Transfer of %s did not lower Mcf (%.12f -> %.12f)",
                    chosen.evidence_id,
                    mcf,
                    updated,
                )
            mcf = updated
            trace.append(
                TraceStep(
                    kind=TraceKind.TRANSFER,
                    subset_count=r,
                    evidence_id=outcome.evidence_id,
                    source=outcome.source,
                    target=outcome.target,
                    evaluations=evaluations,
                    metaconflict=mcf,
                    subset_conflicts=state.conflicts(),
                    closed_form_conflicts=(outcome.closed_form_source, outcome.closed_form_target),
                    blocks=state.blocks(),
                )
            )

        return SubsetCountRun(
            subset_count=r,
            partition=state.to_partition(),
            metaconflict=mcf,
            transfers=transfers,
            capped=capped,
        )

    # ==========================================================================
    # Helpers
    # ==========================================================================

    def _answer(self, runs: list[SubsetCountRun], trace: list[TraceStep]) -> SolveResult:
        best = min(runs, key=lambda run: (run.metaconflict, run.subset_count))
        trace.append(
            TraceStep(
                kind=TraceKind.ANSWER,
                subset_count=best.subset_count,
                visited=tuple(run.subset_count for run in runs),
                metaconflict=best.metaconflict,
                blocks=best.partition.blocks(),
            )
        )
        return SolveResult(
            partition=best.partition,
            metaconflict=best.metaconflict,
            runs=tuple(runs),
            trace=tuple(trace),
        )

    @staticmethod
    def _check_inputs(evidences: Sequence[Evidence], dist: DomainDistribution) -> None:
        if not evidences:
            raise PartitionError("At least one evidence is required")
        ids = [e.id for e in evidences]
        if len(set(ids)) != len(ids):
            raise PartitionError("Evidence ids must be unique")
        frame = evidences[0].frame
        if not all(same_frame(frame, e.frame) for e in evidences):
            raise PartitionError("All evidences must share one frame")
        beyond = [count for count in dist.support if count > len(evidences)]
        if beyond:
            raise PartitionError(
                f"Distribution gives mass to {beyond} events but there are only "
                f"{len(evidences)} evidences"
            )


def solve(
    evidences: Sequence[Evidence],
    dist: DomainDistribution,
    settings: Settings | None = None,
) -> SolveResult:
    """Solve with a fresh MetaconflictSolver."""
    return MetaconflictSolver(settings).solve(evidences, dist)

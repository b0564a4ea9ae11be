"""
Tests for the exhaustive oracle and, through it, for the solver.

The fast tests pin the enumeration and the definition-level conflict. The
slow suites run the solver against the oracle on hundreds of random
corpora and check the pruning bounds and the invariance of the optimum
under a new, totally conflicting evidence.
"""

import math
import random
from collections.abc import Callable

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.belief import CombinationError, Evidence, Frame, subset_conflict
from src.config import Settings
from src.criterion import domain_bound_excludes, fewer_subsets_dominated, metaconflict
from src.models import DomainDistribution, Partition, TraceKind
from src.optimizer import MetaconflictSolver, is_local_optimum
from src.oracle import (
    OracleTooLargeError,
    PartitionEnumerator,
    brute_force_min_mcf,
    conflict_by_enumeration,
    enumerated_subset_conflicts,
    stirling2,
)

from tests.conftest import RandomCorpus, random_distribution, random_evidence, random_frame

BELL = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203, 7: 877}


def partition_of(evidences: list[Evidence], code: tuple[int, ...]) -> Partition:
    return Partition(
        subset_count=max(code) + 1,
        assignment={e.id: label + 1 for e, label in zip(evidences, code, strict=True)},
    )


# ==============================================================================
# Enumeration
# ==============================================================================


class TestEnumeration:
    """Tests for restricted-growth enumeration of set partitions."""

    def test_stirling_numbers(self) -> None:
        """Test known Stirling numbers of the second kind."""
        assert stirling2(4, 2) == 7
        assert stirling2(5, 3) == 25
        assert stirling2(7, 1) == 1
        assert stirling2(3, 4) == 0

    @pytest.mark.parametrize("n", range(1, 8))
    def test_all_partitions_counted(self, n: int) -> None:
        """Test every partition appears once: Bell numbers."""
        codes = list(PartitionEnumerator(n))

        assert len(codes) == BELL[n] == len(PartitionEnumerator(n))
        assert len(set(codes)) == len(codes)
        assert codes == sorted(codes)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_fixed_block_count(self, n: int) -> None:
        """Test restricting to r blocks yields S(n, r) codes with exactly r blocks."""
        for r in range(1, n + 1):
            codes = list(PartitionEnumerator(n, r))

            assert len(codes) == stirling2(n, r) == len(PartitionEnumerator(n, r))
            assert all(max(code) + 1 == r for code in codes)

    def test_codes_are_restricted_growth(self) -> None:
        """Test each label is at most one above the labels before it."""
        for code in PartitionEnumerator(6):
            assert code[0] == 0
            for k in range(1, len(code)):
                assert code[k] <= max(code[:k]) + 1

    def test_first_and_last(self) -> None:
        """Test lexicographic order starts with one block and ends with singletons."""
        codes = list(PartitionEnumerator(4))

        assert codes[0] == (0, 0, 0, 0)
        assert codes[-1] == (0, 1, 2, 3)

    @pytest.mark.parametrize(("n", "r"), [(0, None), (3, 0), (3, 4)])
    def test_invalid_arguments(self, n: int, r: int | None) -> None:
        """Test empty item sets and impossible block counts are rejected."""
        with pytest.raises(ValueError):
            PartitionEnumerator(n, r)


# ==============================================================================
# Definition-level Conflict
# ==============================================================================


class TestConflictByEnumeration:
    """Tests for conflict computed from focal selections."""

    def test_baker_street(self, baker_evidences: list[Evidence]) -> None:
        """Test the conflict of all four evidences."""
        assert conflict_by_enumeration(baker_evidences) == pytest.approx(0.806)

    def test_matches_fold(self, evidence_factory: Callable[..., Evidence]) -> None:
        """Test enumeration and the folded combination agree on random subsets."""
        rng = random.Random(1)
        for _ in range(1000):
            frame = random_frame(rng)
            evidences = [
                evidence_factory(rng, f"e{k}", frame, with_theta=rng.random() < 0.7)
                for k in range(rng.randint(1, 5))
            ]

            assert conflict_by_enumeration(evidences) == pytest.approx(
                subset_conflict(evidences), abs=1e-12
            )

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_conflict_grows_with_subset(self, seed: int) -> None:
        """Test adding an evidence never lowers the conflict."""
        rng = random.Random(seed)
        frame = random_frame(rng)
        evidences = [random_evidence(rng, f"e{k}", frame) for k in range(rng.randint(2, 5))]

        assert subset_conflict(evidences[:-1]) <= subset_conflict(evidences) + 1e-12

    def test_empty_subset(self) -> None:
        """Test the conflict of nothing is undefined."""
        with pytest.raises(CombinationError):
            conflict_by_enumeration([])

    def test_selection_cap(self, baker_evidences: list[Evidence]) -> None:
        """Test the selection space is capped: four evidences with two focals give 16."""
        with pytest.raises(OracleTooLargeError, match="16") as exc_info:
            conflict_by_enumeration(baker_evidences, max_selections=10)

        assert exc_info.value.requested == 16

    def test_subset_conflicts_of_partition(self, baker_evidences: list[Evidence]) -> None:
        """Test the enumerated conflict of every subset, in subset order."""
        partition = Partition.from_blocks([["e2", "e3"], ["e1", "e4"]])

        conflicts = enumerated_subset_conflicts(partition, baker_evidences)

        assert conflicts == pytest.approx((0.42, 0.0))

    def test_subset_conflicts_respect_cap(self, baker_evidences: list[Evidence]) -> None:
        """Test the selection cap applies to each subset."""
        partition = Partition.from_blocks([["e2", "e3"], ["e1", "e4"]])

        assert len(enumerated_subset_conflicts(partition, baker_evidences, max_selections=4)) == 2
        with pytest.raises(OracleTooLargeError):
            enumerated_subset_conflicts(partition, baker_evidences, max_selections=3)


# ==============================================================================
# Exhaustive Optimum
# ==============================================================================


class TestBruteForce:
    """Tests for the exhaustive minimum metaconflict."""

    def test_baker_street(
        self, baker_evidences: list[Evidence], baker_distribution: DomainDistribution
    ) -> None:
        """Test the optimum over all 15 partitions."""
        optimum = brute_force_min_mcf(baker_evidences, baker_distribution)

        assert optimum.metaconflict == pytest.approx(0.768)
        assert optimum.partition.same_grouping(Partition.from_blocks([["e2", "e3"], ["e1", "e4"]]))
        assert optimum.partitions_examined == 15
        assert optimum.minima_by_count == pytest.approx({1: 0.8836, 2: 0.768, 3: 1.0, 4: 1.0})

    def test_fixed_count(
        self, baker_evidences: list[Evidence], baker_distribution: DomainDistribution
    ) -> None:
        """Test restricting the search to one subset."""
        optimum = brute_force_min_mcf(baker_evidences, baker_distribution, r=1)

        assert optimum.partitions_examined == 1
        assert optimum.partition.subset_count == 1
        assert optimum.metaconflict == pytest.approx(0.8836)

    def test_first_minimum_wins(self, baker_frame: Frame) -> None:
        """Test ties keep the lexicographically first code."""
        evidences = [Evidence.vacuous(f"v{k}", baker_frame) for k in range(3)]

        optimum = brute_force_min_mcf(evidences, DomainDistribution.point(2))

        assert optimum.metaconflict == 0.0
        assert optimum.partition.blocks() == (("v0", "v1"), ("v2",))

    def test_too_many_evidences(self, baker_frame: Frame) -> None:
        """Test the size cap."""
        evidences = [Evidence.vacuous(f"v{k}", baker_frame) for k in range(11)]

        with pytest.raises(OracleTooLargeError, match="limited to 10, got 11"):
            brute_force_min_mcf(evidences, DomainDistribution.point(1))

    def test_empty_input(self) -> None:
        """Test there is no optimum over nothing."""
        with pytest.raises(ValueError, match="At least one"):
            brute_force_min_mcf([], DomainDistribution.point(1))

    def test_matches_direct_scoring(self, corpus_factory: Callable[..., RandomCorpus]) -> None:
        """Test the oracle minimum equals scoring every partition directly."""
        rng = random.Random(2)
        for _ in range(20):
            evidences, dist = corpus_factory(rng, n=rng.randint(1, 5))

            optimum = brute_force_min_mcf(evidences, dist)

            direct = min(
                metaconflict(partition_of(evidences, code), evidences, dist)
                for code in PartitionEnumerator(len(evidences))
            )
            assert optimum.metaconflict == pytest.approx(direct, abs=1e-12)
            assert optimum.partitions_examined == BELL[len(evidences)]


# ==============================================================================
# Solver against Oracle
# ==============================================================================


@pytest.mark.slow
class TestSolverAgainstOracle:
    """Randomized comparison of the solver with exhaustive search."""

    CORPORA = 200

    def test_agreement(
        self, test_settings: Settings, corpus_factory: Callable[..., RandomCorpus]
    ) -> None:
        """Test the solver finds the optimum in at least 90% of corpora, else a local optimum."""
        solver = MetaconflictSolver(test_settings)
        rng = random.Random(2024)
        agreed = 0
        for _ in range(self.CORPORA):
            evidences, dist = corpus_factory(rng)

            result = solver.solve(evidences, dist)
            optimum = brute_force_min_mcf(evidences, dist)

            assert result.metaconflict >= optimum.metaconflict - 1e-9
            if abs(result.metaconflict - optimum.metaconflict) <= 1e-9:
                agreed += 1
            else:
                assert is_local_optimum(result.partition, evidences)

            for step in result.steps(TraceKind.TRANSFER):
                assert step.source is not None and step.target is not None
                closed_source, closed_target = step.closed_form_conflicts
                assert closed_source == pytest.approx(step.subset_conflicts[step.source - 1], abs=1e-9)
                assert closed_target == pytest.approx(step.subset_conflicts[step.target - 1], abs=1e-9)

        assert agreed >= 0.9 * self.CORPORA

    def test_fixed_count_never_beats_oracle(
        self, test_settings: Settings, corpus_factory: Callable[..., RandomCorpus]
    ) -> None:
        """Test the search for r subsets never undercuts the exhaustive minimum for r."""
        solver = MetaconflictSolver(test_settings)
        rng = random.Random(31)
        for _ in range(100):
            evidences, dist = corpus_factory(rng)
            r = rng.randint(1, len(evidences))

            result = solver.solve_fixed(evidences, dist, r)
            optimum = brute_force_min_mcf(evidences, dist, r=r)

            assert result.subset_count == r
            assert result.metaconflict >= optimum.metaconflict - 1e-12


@pytest.mark.slow
class TestPruningBounds:
    """The pruning rules never discard a count holding a better optimum."""

    def test_fewer_subsets_dominated(self, corpus_factory: Callable[..., RandomCorpus]) -> None:
        """Test less prior mass on fewer subsets means a worse optimum."""
        rng = random.Random(41)
        checked = 0
        for _ in range(200):
            evidences, dist = corpus_factory(rng)
            minima = brute_force_min_mcf(evidences, dist).minima_by_count

            for r in minima:
                for j in range(1, r):
                    if not fewer_subsets_dominated(dist, j, r):
                        continue
                    checked += 1
                    assert minima[r] <= minima[j] + 1e-12
                    if dist.mass(r) - dist.mass(j) >= 1e-6 and minima[j] < 1.0 - 1e-6:
                        assert minima[r] < minima[j]

        assert checked > 0

    def test_domain_bound(
        self, test_settings: Settings, corpus_factory: Callable[..., RandomCorpus]
    ) -> None:
        """Test counts pruned by their domain conflict hold no better partition."""
        solver = MetaconflictSolver(test_settings)
        rng = random.Random(43)
        for _ in range(200):
            evidences, dist = corpus_factory(rng)
            minima = brute_force_min_mcf(evidences, dist).minima_by_count
            result = solver.solve(evidences, dist)

            for step in result.steps(TraceKind.PRUNE):
                assert step.metaconflict is not None
                for j in step.counts:
                    assert domain_bound_excludes(dist, j, step.metaconflict)
                    assert minima[j] > step.metaconflict

    def test_answer_count_is_visited(
        self, test_settings: Settings, corpus_factory: Callable[..., RandomCorpus]
    ) -> None:
        """Test the oracle optimum is never below the best run among visited counts."""
        solver = MetaconflictSolver(test_settings)
        rng = random.Random(47)
        for _ in range(200):
            evidences, dist = corpus_factory(rng)
            optimum = brute_force_min_mcf(evidences, dist)
            result = solver.solve(evidences, dist)

            visited = {run.subset_count for run in result.runs}
            best_visited = min(optimum.minima_by_count[r] for r in visited)
            assert best_visited == pytest.approx(optimum.metaconflict, abs=1e-12)


@pytest.mark.slow
class TestConflictingNewEvidence:
    """A new evidence contradicting every subset ends up on its own."""

    def test_optimum_unchanged(self) -> None:
        """Test the extended optimum restricts to the original one."""
        rng = random.Random(53)
        tested = 0
        for _ in range(300):
            base = random_frame(rng, max_actions=3)
            frame = Frame(action_atoms=(*base.action_atoms, "Z"), event_labels=base.event_labels)
            # No evidence of the corpus mentions Z, so Z @ * conflicts with every subset
            without_z = frame.action_mask >> 1
            n = rng.randint(2, 5)
            evidences = [
                random_evidence(rng, f"e{k + 1}", frame, with_theta=False, action_mask=without_z)
                for k in range(n)
            ]
            dist = random_distribution(rng, n)

            scores = sorted(
                (metaconflict(partition_of(evidences, code), evidences, dist), code)
                for code in PartitionEnumerator(n)
            )
            best, runner_up = scores[0][0], scores[1][0]
            if best >= 1.0 - 1e-6 or runner_up - best < 1e-9:
                continue
            unique = partition_of(evidences, scores[0][1])

            intruder = Evidence.simple_support("z", frame, frame.focal(["Z"], "*"), 1.0)
            shifted = DomainDistribution(masses={k + 1: m for k, m in dist.masses.items()})
            extended = brute_force_min_mcf([*evidences, intruder], shifted)

            assert extended.metaconflict == pytest.approx(best, abs=1e-12)
            assert extended.partition.restricted_to(e.id for e in evidences) == unique.grouping()
            assert frozenset({"z"}) in extended.partition.grouping()
            tested += 1

        assert tested >= 20

    def test_intruder_conflicts_with_every_subset(self) -> None:
        """Test the constructed evidence has conflict one against any subset."""
        rng = random.Random(59)
        for _ in range(50):
            base = random_frame(rng, max_actions=3)
            frame = Frame(action_atoms=(*base.action_atoms, "Z"), event_labels=base.event_labels)
            without_z = frame.action_mask >> 1
            evidences = [
                random_evidence(rng, f"e{k}", frame, with_theta=False, action_mask=without_z)
                for k in range(rng.randint(1, 4))
            ]
            intruder = Evidence.simple_support("z", frame, frame.focal(["Z"], "*"), 1.0)

            assert subset_conflict([*evidences, intruder]) == pytest.approx(1.0, abs=1e-12)
            assert math.isclose(conflict_by_enumeration([*evidences, intruder]), 1.0, abs_tol=1e-12)

"""
Dempster combination with explicit conflict tracking.

The combined state of a set of evidences keeps its focal masses
unnormalized and carries the mass that fell on empty intersections as a
separate conflict figure, so ``conflict + sum(masses) == 1`` throughout.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from src.belief.evidence import Evidence
from src.belief.focal import FocalElement, Frame, FrameMismatchError, intersect, same_frame

logger = logging.getLogger(__name__)


class CombinationError(ValueError):
    """Raised when a combination cannot be formed."""


class ImpossibleEvidenceError(CombinationError):
    """Raised when evidences that must be merged contradict each other completely."""

    def __init__(self, evidence_ids: Sequence[str]):
        self.evidence_ids = tuple(evidence_ids)
        super().__init__(
            f"Evidences {', '.join(self.evidence_ids)} are totally contradictory (conflict 1)"
        )


FocalMap = tuple[tuple[FocalElement, float], ...]


def _canonical(masses: dict[FocalElement, float]) -> FocalMap:
    return tuple(sorted(masses.items(), key=lambda pair: pair[0].sort_key))


@dataclass(frozen=True, slots=True)
class CombinedState:
    """Unnormalized focal masses of a combination plus its conflict."""

    frame: Frame
    focals: FocalMap
    conflict: float

    @classmethod
    def unit(cls, frame: Frame) -> "CombinedState":
        """The neutral state: all mass on Θ, no conflict."""
        return cls(frame, ((frame.theta(), 1.0),), 0.0)

    @property
    def total_mass(self) -> float:
        return math.fsum(mass for _, mass in self.focals)

    def mass_of(self, focal: FocalElement) -> float:
        for candidate, mass in self.focals:
            if candidate == focal:
                return mass
        return 0.0

    def as_dict(self) -> dict[FocalElement, float]:
        return dict(self.focals)


def combine(state: CombinedState, evidence: Evidence) -> CombinedState:
    """
    Fold one more evidence into a combined state with Dempster's rule.

    Products landing on an empty intersection are added to the conflict;
    everything else accumulates on the intersection. No normalization.

    Raises:
        FrameMismatchError: If the evidence uses a different frame.
    """
    if not same_frame(state.frame, evidence.frame):
        raise FrameMismatchError(f"Evidence {evidence.id!r} uses a different frame")

    accumulated: dict[FocalElement, float] = {}
    conflict = state.conflict
    for focal, mass in state.focals:
        for other, other_mass in evidence.focals:
            product = mass * other_mass
            joint = intersect(focal, other)
            if joint.is_empty:
                conflict += product
            else:
                accumulated[joint] = accumulated.get(joint, 0.0) + product

    return CombinedState(state.frame, _canonical(accumulated), conflict)


def fold(evidences: Iterable[Evidence], frame: Frame | None = None) -> CombinedState:
    """
    Combine evidences left to right starting from the unit state.

    Args:
        evidences: Evidences to combine.
        frame: Frame of the unit state; required when ``evidences`` may be empty.

    Raises:
        CombinationError: If there is nothing to fold and no frame was given.
    """
    items = list(evidences)
    if frame is None:
        if not items:
            raise CombinationError("Cannot combine an empty list of evidences")
        frame = items[0].frame
    state = CombinedState.unit(frame)
    for evidence in items:
        state = combine(state, evidence)
    return state


def subset_conflict(evidences: Sequence[Evidence]) -> float:
    """
    Conflict of a subset of evidences, i.e. the mass of all focal selections
    with an empty overall intersection.

    Raises:
        CombinationError: If ``evidences`` is empty.
    """
    if not evidences:
        raise CombinationError("Subset conflict is undefined for an empty subset")
    return fold(evidences).conflict


def precombine_specific(evidences: Sequence[Evidence]) -> list[Evidence]:
    """
    Merge evidences that certainly refer to the same event.

    Evidences whose non-Θ focals all carry one and the same singleton event
    part are combined (normalized) into a single evidence per event, placed
    where the first of them stood and named by joining the ids with ``+``.
    All other evidences pass through unchanged.

    Raises:
        ImpossibleEvidenceError: If a group combines to conflict 1.
    """
    groups: dict[int, list[int]] = {}
    for index, evidence in enumerate(evidences):
        event = evidence.specific_event()
        if event is not None:
            groups.setdefault(event, []).append(index)

    merged: dict[int, Evidence] = {}
    absorbed: set[int] = set()
    for indices in groups.values():
        if len(indices) < 2:
            continue
        members = [evidences[i] for i in indices]
        ids = [e.id for e in members]
        state = fold(members)
        if not state.focals:
            raise ImpossibleEvidenceError(ids)

        total = state.total_mass
        merged[indices[0]] = Evidence(
            id="+".join(ids),
            frame=state.frame,
            focals=tuple((focal, mass / total) for focal, mass in state.focals),
        )
        absorbed.update(indices[1:])
        logger.info("Precombined %s (conflict %.6f normalized away)", ids, state.conflict)

    return [merged.get(i, e) for i, e in enumerate(evidences) if i not in absorbed]

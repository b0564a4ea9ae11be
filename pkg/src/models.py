"""
Pydantic models for the Metaconflict Partitioner.

These models define the strict schemas for:
- The prior over the number of events and partitions of evidences
- Scores, stability margins and transfer evaluations
- The solver trace and per-count results
- Corpora and machine-readable reports

Every float that reaches a JSON report is written with exactly nine
decimals so identical inputs give byte-identical reports.
"""

import math
from collections.abc import Iterable, Sequence
from enum import Enum
from hashlib import sha256
from typing import Annotated

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationInfo,
    computed_field,
    field_validator,
    model_validator,
)

from src.belief import Evidence, Frame
from src.belief.evidence import tolerance_from
from src.belief.focal import same_frame

REPORT_DECIMALS = 9


def format_fixed(value: float) -> str:
    """Fixed nine-decimal rendering used by every report."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{REPORT_DECIMALS}f}"
    return "0.000000000" if text == "-0.000000000" else text


Fixed9 = Annotated[float, PlainSerializer(format_fixed, return_type=str, when_used="json")]


# ==============================================================================
# Domain Models
# ==============================================================================


class DomainDistribution(BaseModel):
    """
    Prior masses m(E_i) over the possible number of events.

    Counts with no entry have mass 0.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    masses: dict[int, float] = Field(
        ...,
        min_length=1,
        description="Mass per possible number of events",
    )

    @field_validator("masses")
    @classmethod
    def validate_entries(cls, v: dict[int, float]) -> dict[int, float]:
        """Counts are positive, masses lie in [0, 1]; entries kept in count order."""
        for count, mass in v.items():
            if count < 1:
                raise ValueError(f"Number of events must be positive, got {count}")
            if not 0.0 <= mass <= 1.0:
                raise ValueError(f"Mass for {count} events must be in [0, 1], got {mass}")
        return dict(sorted(v.items()))

    @model_validator(mode="after")
    def validate_total(self, info: ValidationInfo) -> "DomainDistribution":
        """Ensure the masses form a probability distribution."""
        total = math.fsum(self.masses.values())
        if abs(total - 1.0) > tolerance_from(info):
            raise ValueError(f"Distribution masses sum to {total}, expected 1")
        return self

    @classmethod
    def point(cls, count: int) -> "DomainDistribution":
        """All mass on a single number of events."""
        return cls(masses={count: 1.0})

    def mass(self, count: int) -> float:
        return self.masses.get(count, 0.0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(count for count, mass in self.masses.items() if mass > 0.0)


class Partition(BaseModel):
    """
    Assignment of every evidence to exactly one of r nonempty subsets.

    Subsets are numbered 1..r; the assignment keeps evidence order.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    subset_count: int = Field(
        ...,
        ge=1,
        description="Number of subsets r",
    )

    assignment: dict[str, int] = Field(
        ...,
        min_length=1,
        description="Evidence id to subset index in 1..r",
    )

    @model_validator(mode="after")
    def validate_subsets(self) -> "Partition":
        """Ensure indices are in range and no subset is empty."""
        used = set(self.assignment.values())
        out_of_range = sorted(i for i in used if not 1 <= i <= self.subset_count)
        if out_of_range:
            raise ValueError(f"Subset indices {out_of_range} outside 1..{self.subset_count}")
        empty = sorted(set(range(1, self.subset_count + 1)) - used)
        if empty:
            raise ValueError(f"Subsets {empty} are empty")
        return self

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[str]]) -> "Partition":
        """Build from blocks of evidence ids; block k becomes subset k + 1."""
        assignment: dict[str, int] = {}
        for index, block in enumerate(blocks, start=1):
            for evidence_id in block:
                if evidence_id in assignment:
                    raise ValueError(f"Evidence {evidence_id!r} assigned twice")
                assignment[evidence_id] = index
        return cls(subset_count=len(blocks), assignment=assignment)

    def members(self, subset: int) -> tuple[str, ...]:
        return tuple(eid for eid, index in self.assignment.items() if index == subset)

    def blocks(self) -> tuple[tuple[str, ...], ...]:
        return tuple(self.members(i) for i in range(1, self.subset_count + 1))

    def grouping(self) -> frozenset[frozenset[str]]:
        """Label-free view of the partition."""
        return frozenset(frozenset(block) for block in self.blocks())

    def same_grouping(self, other: "Partition") -> bool:
        return self.grouping() == other.grouping()

    def restricted_to(self, evidence_ids: Iterable[str]) -> frozenset[frozenset[str]]:
        """Label-free view of the partition restricted to some evidences."""
        keep = set(evidence_ids)
        blocks = (frozenset(b for b in block if b in keep) for block in self.blocks())
        return frozenset(block for block in blocks if block)


class Corpus(BaseModel):
    """A validated problem instance: frame, prior and evidences."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    title: str = Field(
        default="",
        description="Optional title of the corpus",
    )

    frame: Frame

    distribution: DomainDistribution

    evidences: tuple[Evidence, ...] = Field(
        ...,
        min_length=1,
        description="Evidences in corpus order",
    )

    @field_validator("title")
    @classmethod
    def validate_title(cls, v: str) -> str:
        """Titles are one line without '#', which starts a comment in corpus text."""
        if "#" in v or "\n" in v or "\r" in v:
            raise ValueError(f"Title must be a single line without '#', got {v!r}")
        return v.strip()

    @model_validator(mode="after")
    def validate_evidences(self) -> "Corpus":
        """Ensure unique ids and a shared frame."""
        ids = [e.id for e in self.evidences]
        if len(ids) != len(set(ids)):
            duplicates = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"Duplicate evidence ids: {duplicates}")
        if not all(same_frame(self.frame, e.frame) for e in self.evidences):
            raise ValueError("All evidences must use the corpus frame")
        return self

    @staticmethod
    def compute_hash(content: str) -> str:
        """Compute SHA-256 hash of content."""
        return sha256(content.encode("utf-8")).hexdigest()


# ==============================================================================
# Criterion Models
# ==============================================================================


class PartitionScore(BaseModel):
    """Breakdown of the metaconflict of one partition."""

    model_config = ConfigDict(frozen=True)

    domain_conflict: Fixed9 = Field(..., ge=0.0, le=1.0)
    subset_conflicts: tuple[Fixed9, ...]
    metaconflict: Fixed9 = Field(..., ge=0.0, le=1.0)
    plausibility: Fixed9 = Field(..., ge=0.0, le=1.0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def belief(self) -> Fixed9:
        """Nothing ever supports a partition directly, only its negation."""
        return 0.0


class StabilityMargin(BaseModel):
    """Change of metaconflict if one evidence left its subset for a fresh one."""

    model_config = ConfigDict(frozen=True)

    evidence_id: str
    subset: int = Field(..., ge=1)
    metaconflict_after_split: Fixed9
    margin: Fixed9


class PartitionStability(BaseModel):
    """Split margins of every evidence in a non-singleton subset."""

    model_config = ConfigDict(frozen=True)

    metaconflict: Fixed9
    margins: tuple[StabilityMargin, ...]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def is_stable(self) -> bool:
        """Every split raises the metaconflict."""
        return all(m.margin > 0.0 for m in self.margins)


# ==============================================================================
# Optimizer Models
# ==============================================================================


class TransferEvaluation(BaseModel):
    """
    Quotients of one evidence against every subset.

    ``quotients[j - 1]`` is the quotient for subset j; the home subset uses
    the removal branch, all others the insertion branch.
    """

    model_config = ConfigDict(frozen=True)

    evidence_id: str
    home: int = Field(..., ge=1)
    quotients: tuple[Fixed9, ...]
    best_target: int = Field(..., ge=1)
    ratio: Fixed9
    favourable: bool


class TraceKind(str, Enum):
    """Kinds of records in the solver trace."""

    DOMAIN_CONFLICTS = "domain-conflicts"
    SELECT_COUNT = "select-count"
    EQUAL_MASS_DISCARD = "equal-mass-discard"
    SEED_MOVE = "seed-move"
    INITIAL_PARTITION = "initial-partition"
    SINGLE_SUBSET = "single-subset"
    TRANSFER = "transfer"
    NO_TRANSFER = "no-transfer"
    ITERATION_CAP = "iteration-cap"
    PRUNE = "prune"
    ANSWER = "answer"


class TraceStep(BaseModel):
    """
    One record of the solver trace.

    Fields not relevant to a kind keep their empty defaults. For a transfer,
    ``subset_conflicts`` holds every recomputed c_i after the move and
    ``closed_form_conflicts`` the incremental (source, target) values.
    """

    model_config = ConfigDict(frozen=True)

    kind: TraceKind
    subset_count: int | None = None
    remaining: tuple[int, ...] = ()
    visited: tuple[int, ...] = ()
    counts: tuple[int, ...] = ()
    domain_conflicts: tuple[Fixed9, ...] = ()
    evidence_id: str | None = None
    source: int | None = None
    target: int | None = None
    evaluations: tuple[TransferEvaluation, ...] = ()
    metaconflict: Fixed9 | None = None
    subset_conflicts: tuple[Fixed9, ...] = ()
    closed_form_conflicts: tuple[Fixed9, ...] = ()
    blocks: tuple[tuple[str, ...], ...] = ()
    note: str = ""


class SubsetCountRun(BaseModel):
    """Outcome of the local search for one number of subsets."""

    model_config = ConfigDict(frozen=True)

    subset_count: int = Field(..., ge=1)
    partition: Partition
    metaconflict: Fixed9
    transfers: int = Field(..., ge=0)
    capped: bool = False


class SolveResult(BaseModel):
    """Answer of the solver with its per-count runs and trace."""

    model_config = ConfigDict(frozen=True)

    partition: Partition
    metaconflict: Fixed9
    runs: tuple[SubsetCountRun, ...]
    trace: tuple[TraceStep, ...]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def subset_count(self) -> int:
        return self.partition.subset_count

    def run_for(self, subset_count: int) -> SubsetCountRun | None:
        for run in self.runs:
            if run.subset_count == subset_count:
                return run
        return None

    def steps(self, kind: TraceKind) -> tuple[TraceStep, ...]:
        return tuple(step for step in self.trace if step.kind == kind)


class OracleResult(BaseModel):
    """Exhaustive optimum plus the best metaconflict for each subset count."""

    model_config = ConfigDict(frozen=True)

    partition: Partition
    metaconflict: Fixed9
    minima_by_count: dict[int, Fixed9]
    partitions_examined: int = Field(..., ge=1)


# ==============================================================================
# Report Models
# ==============================================================================


class SubsetReport(BaseModel):
    """One subset of the answer."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=1)
    members: tuple[str, ...]
    conflict: Fixed9
    events: tuple[str, ...] = Field(
        default=(),
        description="Events every non-vacuous member can refer to",
    )


class RunSummary(BaseModel):
    """Per-count result line of a report."""

    model_config = ConfigDict(frozen=True)

    subset_count: int
    metaconflict: Fixed9
    transfers: int
    capped: bool
    blocks: tuple[tuple[str, ...], ...]


class OracleComparison(BaseModel):
    """Heuristic answer checked against the exhaustive search."""

    model_config = ConfigDict(frozen=True)

    subset_count: int
    metaconflict: Fixed9
    blocks: tuple[tuple[str, ...], ...]
    partitions_examined: int
    agrees: bool
    local_optimum_certified: bool
    conflicts_verified: bool | None = Field(
        default=None,
        description="Answer subset conflicts match the enumerated ones",
    )


class PartitionReport(BaseModel):
    """Everything a run reports, in a fixed field order."""

    model_config = ConfigDict(frozen=True)

    title: str
    corpus_hash: str
    evidence_count: int
    subset_count: int
    domain_conflict: Fixed9
    metaconflict: Fixed9
    plausibility: Fixed9
    subsets: tuple[SubsetReport, ...]
    stable: bool
    stability: tuple[StabilityMargin, ...]
    runs: tuple[RunSummary, ...]
    trace: tuple[TraceStep, ...] | None = None
    oracle: OracleComparison | None = None

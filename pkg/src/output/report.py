"""
Report generation.

Builds a PartitionReport from a solver result and renders it as plain
text or JSON. Both renderings are deterministic: fixed field order and
nine-decimal numbers.
"""

from collections.abc import Sequence
from enum import Enum
from pathlib import Path

from src.belief import Evidence, Frame
from src.criterion import score_partition, stability_margin
from src.models import (
    Corpus,
    OracleComparison,
    OracleResult,
    PartitionReport,
    RunSummary,
    SolveResult,
    SubsetReport,
    TraceKind,
    TraceStep,
    format_fixed,
)


class ReportFormat(str, Enum):
    """Output formats for reports."""

    TEXT = "text"
    JSON = "json"


# ==============================================================================
# Building
# ==============================================================================


def subset_events(members: Sequence[Evidence], frame: Frame) -> tuple[str, ...]:
    """Events every non-vacuous member can refer to."""
    mask = frame.event_mask
    for evidence in members:
        reference = evidence.event_reference
        if reference:
            mask &= reference
    return frame.event_names(mask)


class ReportBuilder:
    """Collects everything a report shows about one solved corpus."""

    def build(
        self,
        corpus: Corpus,
        evidences: Sequence[Evidence],
        result: SolveResult,
        corpus_hash: str,
        include_trace: bool = False,
        oracle: OracleComparison | None = None,
    ) -> PartitionReport:
        """
        Build a report.

        Args:
            corpus: The corpus as loaded.
            evidences: The evidences actually solved (after any precombination).
            result: Solver result.
            corpus_hash: Hash of the canonical corpus text.
            include_trace: Attach the solver trace.
            oracle: Optional comparison with the exhaustive search.
        """
        partition = result.partition
        score = score_partition(partition, evidences, corpus.distribution)
        stability = stability_margin(partition, evidences, corpus.distribution)
        by_id = {e.id: e for e in evidences}

        subsets = tuple(
            SubsetReport(
                index=index,
                members=members,
                conflict=score.subset_conflicts[index - 1],
                events=subset_events([by_id[m] for m in members], corpus.frame),
            )
            for index, members in enumerate(partition.blocks(), start=1)
        )
        runs = tuple(
            RunSummary(
                subset_count=run.subset_count,
                metaconflict=run.metaconflict,
                transfers=run.transfers,
                capped=run.capped,
                blocks=run.partition.blocks(),
            )
            for run in result.runs
        )

        return PartitionReport(
            title=corpus.title,
            corpus_hash=corpus_hash,
            evidence_count=len(evidences),
            subset_count=partition.subset_count,
            domain_conflict=score.domain_conflict,
            metaconflict=score.metaconflict,
            plausibility=score.plausibility,
            subsets=subsets,
            stable=stability.is_stable,
            stability=stability.margins,
            runs=runs,
            trace=result.trace if include_trace else None,
            oracle=oracle,
        )


def compare_with_oracle(
    result: SolveResult,
    oracle: OracleResult,
    tolerance: float,
    local_optimum: bool,
    subset_conflicts: Sequence[float] | None = None,
    enumerated_conflicts: Sequence[float] | None = None,
) -> OracleComparison:
    """
    Summarize how the solver answer relates to the exhaustive optimum.

    When both conflict sequences are given, the answer subset conflicts are
    also checked against their enumerated values.
    """
    verified: bool | None = None
    if subset_conflicts is not None and enumerated_conflicts is not None:
        verified = len(subset_conflicts) == len(enumerated_conflicts) and all(
            abs(a - b) <= tolerance for a, b in zip(subset_conflicts, enumerated_conflicts, strict=True)
        )
    return OracleComparison(
        subset_count=oracle.partition.subset_count,
        metaconflict=oracle.metaconflict,
        blocks=oracle.partition.blocks(),
        partitions_examined=oracle.partitions_examined,
        agrees=abs(oracle.metaconflict - result.metaconflict) <= tolerance,
        local_optimum_certified=local_optimum,
        conflicts_verified=verified,
    )


# ==============================================================================
# Rendering
# ==============================================================================


def _blocks(blocks: Sequence[Sequence[str]]) -> str:
    return " ".join("{" + ", ".join(block) + "}" for block in blocks)


def _numbers(values: Sequence[float]) -> str:
    return ", ".join(format_fixed(v) for v in values)


def describe_step(step: TraceStep) -> list[str]:
    """Plain-text lines for one trace record."""
    kind = step.kind
    mcf = format_fixed(step.metaconflict) if step.metaconflict is not None else ""

    if kind is TraceKind.DOMAIN_CONFLICTS:
        pairs = ", ".join(
            f"r={count}: {format_fixed(c0)}"
            for count, c0 in zip(step.counts, step.domain_conflicts, strict=True)
        )
        return [f"domain conflicts  {pairs}"]
    if kind is TraceKind.SELECT_COUNT:
        line = f"select r={step.subset_count}"
        if step.note:
            line += f" ({step.note})"
        else:
            line += f"  remaining {list(step.remaining)}  discarded {list(step.counts)}"
        return [line]
    if kind is TraceKind.EQUAL_MASS_DISCARD:
        return [f"  discarded {list(step.counts)} with prior mass equal to r={step.subset_count}"]
    if kind is TraceKind.SEED_MOVE:
        return [
            f"  seed: move {step.evidence_id} from subset {step.source} to new subset "
            f"{step.target} ({step.note})"
        ]
    if kind is TraceKind.INITIAL_PARTITION:
        return [f"  initial {_blocks(step.blocks)}  c = [{_numbers(step.subset_conflicts)}]  Mcf {mcf}"]
    if kind is TraceKind.SINGLE_SUBSET:
        return [f"  single subset, no transfers  Mcf {mcf}"]
    if kind in (TraceKind.TRANSFER, TraceKind.NO_TRANSFER):
        lines = [
            f"    {e.evidence_id}: rho = [{_numbers(e.quotients)}]  home {e.home}  "
            f"best {e.best_target}  ratio {format_fixed(e.ratio)}"
            + ("  favourable" if e.favourable else "")
            for e in step.evaluations
        ]
        if kind is TraceKind.NO_TRANSFER:
            return [*lines, f"  no favourable transfer  Mcf {mcf}"]
        return [
            *lines,
            f"  transfer {step.evidence_id} from subset {step.source} to {step.target}  "
            f"{_blocks(step.blocks)}  c = [{_numbers(step.subset_conflicts)}]  Mcf {mcf}",
        ]
    if kind is TraceKind.ITERATION_CAP:
        return [f"  iteration cap reached  Mcf {mcf}"]
    if kind is TraceKind.PRUNE:
        return [f"prune {list(step.counts)} against Mcf {mcf}  remaining {list(step.remaining)}"]
    return [f"answer r={step.subset_count} {_blocks(step.blocks)}  Mcf {mcf}"]


class ReportGenerator:
    """Renders PartitionReports."""

    def generate(self, report: PartitionReport, format: ReportFormat = ReportFormat.TEXT) -> str:
        if format is ReportFormat.JSON:
            return report.model_dump_json(indent=2, exclude_none=True) + "\n"
        return self._generate_text(report)

    def save(
        self,
        report: PartitionReport,
        output_path: Path,
        format: ReportFormat = ReportFormat.TEXT,
    ) -> Path:
        """
        Save a report to file.

        Returns:
            Path to the saved file.
        """
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(self.generate(report, format), encoding="utf-8")
        return output_path

    def _generate_text(self, report: PartitionReport) -> str:
        lines = [
            f"Corpus: {report.title or '(untitled)'}",
            f"SHA-256: {report.corpus_hash}",
            f"Evidences: {report.evidence_count}",
            f"Subsets: {report.subset_count}",
            f"Domain conflict: {format_fixed(report.domain_conflict)}",
            f"Metaconflict: {format_fixed(report.metaconflict)}",
            f"Plausibility: {format_fixed(report.plausibility)}",
            "",
            "Partition:",
        ]
        for subset in report.subsets:
            events = ", ".join(subset.events) or "-"
            lines.append(
                f"  {subset.index}: {{{', '.join(subset.members)}}}  "
                f"conflict {format_fixed(subset.conflict)}  events {events}"
            )

        lines += ["", f"Stability: {'stable' if report.stable else 'UNSTABLE'}"]
        for margin in report.stability:
            lines.append(
                f"  split {margin.evidence_id} from subset {margin.subset}: "
                f"Mcf {format_fixed(margin.metaconflict_after_split)} "
                f"(change {format_fixed(margin.margin)})"
            )

        lines += ["", "Runs:"]
        for run in report.runs:
            flag = "  capped" if run.capped else ""
            lines.append(
                f"  r={run.subset_count}: Mcf {format_fixed(run.metaconflict)}  "
                f"transfers {run.transfers}  {_blocks(run.blocks)}{flag}"
            )

        if report.trace is not None:
            lines += ["", "Trace:"]
            for step in report.trace:
                lines += [f"  {line}" for line in describe_step(step)]

        if report.oracle is not None:
            oracle = report.oracle
            verdict = "agrees" if oracle.agrees else "differs"
            lines += [
                "",
                f"Oracle: {verdict} ({oracle.partitions_examined} partitions examined)",
                f"  optimum r={oracle.subset_count} {_blocks(oracle.blocks)}  "
                f"Mcf {format_fixed(oracle.metaconflict)}",
                f"  local optimum certified: {'yes' if oracle.local_optimum_certified else 'no'}",
            ]
            if oracle.conflicts_verified is not None:
                lines.append(
                    "  subset conflicts by enumeration: "
                    f"{'match' if oracle.conflicts_verified else 'mismatch'}"
                )

        return "\n".join(lines) + "\n"

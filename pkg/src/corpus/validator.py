"""
Corpus validation module.

Checks a parsed CorpusDocument against the rules a problem instance must
satisfy and reports every violation with the line it comes from.
"""

import math
from collections.abc import Sequence

from src.belief import Evidence
from src.belief.evidence import MASS_TOLERANCE
from src.belief.focal import ALL, MAX_FRAME_SIZE, NAME_PATTERN
from src.corpus.parser import CorpusDocument, EvidenceSection
from src.models import Corpus


class CorpusValidationError(Exception):
    """Raised when corpus validation fails."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        message = "Corpus validation failed:\n" + "\n".join(f"  - {e}" for e in errors)
        super().__init__(message)


class CorpusValidator:
    """
    Validates corpora for completeness and consistency.

    Checks:
    1. The frame declares unique, well-formed action and event names
    2. The distribution is a probability distribution over positive counts
       no larger than the number of evidences
    3. Evidence ids are unique and every evidence has at least one focal line
    4. Focal lines use declared names and masses in (0, 1] summing to at most 1
    """

    def __init__(self, tolerance: float = MASS_TOLERANCE):
        self.tolerance = tolerance

    def validate(self, document: CorpusDocument) -> tuple[bool, list[str]]:
        """
        Validate a corpus document and return any issues found.

        Returns:
            Tuple of (is_valid, list of issues).
        """
        issues: list[str] = []

        issues.extend(self._validate_frame(document))
        issues.extend(self._validate_distribution(document))
        issues.extend(self._validate_evidence_ids(document))
        for section in document.evidences:
            issues.extend(self._validate_evidence(section, document))

        return len(issues) == 0, issues

    def validate_or_raise(self, document: CorpusDocument) -> None:
        """
        Validate a corpus document and raise if invalid.

        Raises:
            CorpusValidationError: If validation fails.
        """
        is_valid, issues = self.validate(document)
        if not is_valid:
            raise CorpusValidationError(issues)

    def validate_merged(self, corpus: Corpus, evidences: Sequence[Evidence]) -> list[str]:
        """
        Issues left once evidences specific to the same event were merged.

        Merging shrinks the number of evidences, so counts the distribution
        allows for the corpus as written can become unreachable.
        """
        beyond = [count for count in corpus.distribution.support if count > len(evidences)]
        if not beyond:
            return []
        written = {e.id for e in corpus.evidences}
        merged = [e.id for e in evidences if e.id not in written]
        return [
            f"[distribution]: mass on {beyond} events, but merging {', '.join(merged)} "
            f"leaves {len(evidences)} evidences"
        ]

    def _validate_frame(self, document: CorpusDocument) -> list[str]:
        issues: list[str] = []
        for kind, names, line in (
            ("actions", document.actions, document.actions_line),
            ("events", document.events, document.events_line),
        ):
            if line is None:
                issues.append(f"[frame]: '{kind}' is not declared")
                continue
            if len(names) > MAX_FRAME_SIZE:
                issues.append(f"Line {line}: at most {MAX_FRAME_SIZE} {kind}, got {len(names)}")
            for name in names:
                if not NAME_PATTERN.match(name):
                    issues.append(f"Line {line}: invalid name {name!r}")
            duplicates = sorted({n for n in names if names.count(n) > 1})
            if duplicates:
                issues.append(f"Line {line}: duplicate {kind} {duplicates}")
        return issues

    def _validate_distribution(self, document: CorpusDocument) -> list[str]:
        if not document.distribution:
            return ["[distribution]: no entries"]

        issues: list[str] = []
        seen: set[int] = set()
        for entry in document.distribution:
            if entry.count < 1:
                issues.append(f"Line {entry.line_number}: number of events must be positive")
            if entry.count in seen:
                issues.append(f"Line {entry.line_number}: count {entry.count} listed twice")
            seen.add(entry.count)
            if not 0.0 <= entry.mass <= 1.0:
                issues.append(f"Line {entry.line_number}: mass {entry.mass} outside [0, 1]")
            elif entry.mass > 0.0 and entry.count > len(document.evidences):
                issues.append(
                    f"Line {entry.line_number}: {entry.count} events need at least "
                    f"{entry.count} evidences, corpus has {len(document.evidences)}"
                )

        total = math.fsum(entry.mass for entry in document.distribution)
        if abs(total - 1.0) > self.tolerance:
            issues.append(f"[distribution]: masses sum to {total}, expected 1")
        return issues

    def _validate_evidence_ids(self, document: CorpusDocument) -> list[str]:
        if not document.evidences:
            return ["No [evidence] sections found"]

        issues: list[str] = []
        first_seen: dict[str, int] = {}
        for section in document.evidences:
            if not NAME_PATTERN.match(section.evidence_id):
                issues.append(f"Line {section.line_number}: invalid evidence id {section.evidence_id!r}")
            if section.evidence_id in first_seen:
                issues.append(
                    f"Line {section.line_number}: evidence {section.evidence_id!r} already "
                    f"defined on line {first_seen[section.evidence_id]}"
                )
            else:
                first_seen[section.evidence_id] = section.line_number
        return issues

    def _validate_evidence(self, section: EvidenceSection, document: CorpusDocument) -> list[str]:
        label = f"Evidence {section.evidence_id!r} (line {section.line_number})"
        if not section.focals:
            return [f"{label}: no focal elements"]

        issues: list[str] = []
        keys: set[tuple[frozenset[str], frozenset[str]]] = set()
        for focal in section.focals:
            for kind, names, declared in (
                ("action", focal.actions, document.actions),
                ("event", focal.events, document.events),
            ):
                unknown = [n for n in names if n != ALL and n not in declared]
                if unknown and declared:
                    issues.append(f"Line {focal.line_number}: unknown {kind} {', '.join(unknown)}")
            if not 0.0 < focal.mass <= 1.0:
                issues.append(f"Line {focal.line_number}: mass {focal.mass} outside (0, 1]")

            key = (self._expand(focal.actions, document.actions), self._expand(focal.events, document.events))
            if key in keys:
                issues.append(f"Line {focal.line_number}: focal element listed twice")
            keys.add(key)

        total = math.fsum(focal.mass for focal in section.focals)
        if total > 1.0 + self.tolerance:
            issues.append(f"{label}: masses sum to {total}, more than 1")
        return issues

    @staticmethod
    def _expand(names: tuple[str, ...], declared: tuple[str, ...]) -> frozenset[str]:
        return frozenset(declared) if ALL in names else frozenset(names)

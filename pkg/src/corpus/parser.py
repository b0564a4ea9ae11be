"""
Corpus parser module.

Parses the line-oriented corpus text format into a raw CorpusDocument that
remembers the line of every entry, so later validation can cite it.

Format::

    # comment
    [corpus]
    title = Baker Street
    [frame]
    actions = BO, BI, R
    events = E1, E2
    [distribution]
    1 = 0.6
    2 = 0.4
    [evidence e1]
    BO @ E1 = 0.8

A ``*`` stands for every action or every event. Masses that sum below 1
leave the remainder on the whole frame.
"""

import math
import re
from typing import Any

from pydantic import BaseModel, ConfigDict


class CorpusParseError(Exception):
    """Raised when corpus parsing fails."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number:
            message = f"Line {line_number}: {message}"
        super().__init__(message)


# ==============================================================================
# Raw Document
# ==============================================================================


class FocalLine(BaseModel):
    """One ``actions @ events = mass`` entry."""

    model_config = ConfigDict(frozen=True)

    line_number: int
    actions: tuple[str, ...]
    events: tuple[str, ...]
    mass: float


class EvidenceSection(BaseModel):
    """One ``[evidence <id>]`` section."""

    model_config = ConfigDict(frozen=True)

    line_number: int
    evidence_id: str
    focals: tuple[FocalLine, ...] = ()


class DistributionLine(BaseModel):
    """One ``count = mass`` entry of the distribution."""

    model_config = ConfigDict(frozen=True)

    line_number: int
    count: int
    mass: float


class CorpusDocument(BaseModel):
    """Everything a corpus file says, before any semantic check."""

    model_config = ConfigDict(frozen=True)

    title: str = ""
    actions: tuple[str, ...] = ()
    actions_line: int | None = None
    events: tuple[str, ...] = ()
    events_line: int | None = None
    distribution: tuple[DistributionLine, ...] = ()
    evidences: tuple[EvidenceSection, ...] = ()


class CorpusParser:
    """Parses corpus text into a CorpusDocument."""

    SECTION_PATTERN = re.compile(r"^\[\s*(corpus|frame|distribution|evidence)(?:\s+(\S+))?\s*\]$")

    SETTING_PATTERN = re.compile(r"^([A-Za-z_]+)\s*=\s*(.*)$")

    DISTRIBUTION_PATTERN = re.compile(r"^(\d+)\s*=\s*(\S+)$")

    FOCAL_PATTERN = re.compile(r"^([^@=]+)@([^@=]+)=\s*(\S+)$")

    FRAME_KEYS = frozenset(["actions", "events"])

    def parse(self, content: str) -> CorpusDocument:
        """
        Parse corpus content.

        Args:
            content: Raw text of the corpus.

        Returns:
            CorpusDocument with line numbers.

        Raises:
            CorpusParseError: If a line does not fit the format.
        """
        if not content or not content.strip():
            raise CorpusParseError("Corpus content is empty")

        fields: dict[str, Any] = {}
        distribution: list[DistributionLine] = []
        evidences: list[EvidenceSection] = []
        focals: list[FocalLine] = []
        current: EvidenceSection | None = None
        section: str | None = None
        seen: set[str] = set()

        for line_num, raw in enumerate(content.splitlines(), start=1):
            line = self._strip_comment(raw)
            if not line:
                continue

            header = self.SECTION_PATTERN.match(line)
            if header:
                if current is not None:
                    evidences.append(current.model_copy(update={"focals": tuple(focals)}))
                    current = None
                section, argument = header.group(1), header.group(2)
                if section == "evidence":
                    if argument is None:
                        raise CorpusParseError("Evidence section needs an id", line_num)
                    current = EvidenceSection(line_number=line_num, evidence_id=argument)
                    focals = []
                elif argument is not None:
                    raise CorpusParseError(f"Section [{section}] takes no argument", line_num)
                elif section in seen:
                    raise CorpusParseError(f"Section [{section}] appears twice", line_num)
                seen.add(section)
                continue

            if section is None:
                raise CorpusParseError(f"Entry outside any section: {line!r}", line_num)
            if section == "corpus":
                self._parse_corpus_line(line, line_num, fields)
            elif section == "frame":
                self._parse_frame_line(line, line_num, fields)
            elif section == "distribution":
                distribution.append(self._parse_distribution_line(line, line_num))
            else:
                focals.append(self._parse_focal_line(line, line_num))

        if current is not None:
            evidences.append(current.model_copy(update={"focals": tuple(focals)}))

        return CorpusDocument(
            **fields,
            distribution=tuple(distribution),
            evidences=tuple(evidences),
        )

    @staticmethod
    def _strip_comment(line: str) -> str:
        return line.split("#", 1)[0].strip()

    def _parse_corpus_line(self, line: str, line_num: int, fields: dict[str, Any]) -> None:
        match = self.SETTING_PATTERN.match(line)
        if not match or match.group(1).lower() != "title":
            raise CorpusParseError(f"Expected 'title = <text>', got {line!r}", line_num)
        fields["title"] = match.group(2).strip()

    def _parse_frame_line(self, line: str, line_num: int, fields: dict[str, Any]) -> None:
        match = self.SETTING_PATTERN.match(line)
        key = match.group(1).lower() if match else ""
        if not match or key not in self.FRAME_KEYS:
            raise CorpusParseError(
                f"Expected 'actions = ...' or 'events = ...', got {line!r}", line_num
            )
        if f"{key}_line" in fields:
            raise CorpusParseError(f"'{key}' declared twice", line_num)
        names = self._split_names(match.group(2))
        if not names:
            raise CorpusParseError(f"'{key}' lists no names", line_num)
        fields[key] = names
        fields[f"{key}_line"] = line_num

    def _parse_distribution_line(self, line: str, line_num: int) -> DistributionLine:
        match = self.DISTRIBUTION_PATTERN.match(line)
        if not match:
            raise CorpusParseError(f"Expected '<count> = <mass>', got {line!r}", line_num)
        return DistributionLine(
            line_number=line_num,
            count=int(match.group(1)),
            mass=self._parse_mass(match.group(2), line_num),
        )

    def _parse_focal_line(self, line: str, line_num: int) -> FocalLine:
        match = self.FOCAL_PATTERN.match(line)
        if not match:
            raise CorpusParseError(
                f"Expected '<actions> @ <events> = <mass>', got {line!r}", line_num
            )
        actions = self._split_names(match.group(1))
        events = self._split_names(match.group(2))
        if not actions or not events:
            raise CorpusParseError("A focal element needs actions and events", line_num)
        return FocalLine(
            line_number=line_num,
            actions=actions,
            events=events,
            mass=self._parse_mass(match.group(3), line_num),
        )

    @staticmethod
    def _split_names(text: str) -> tuple[str, ...]:
        return tuple(name.strip() for name in text.split(",") if name.strip())

    @staticmethod
    def _parse_mass(text: str, line_num: int) -> float:
        """Parse a mass value from string."""
        try:
            mass = float(text)
        except ValueError as e:
            raise CorpusParseError(f"Invalid mass value: {text}", line_num) from e
        if not math.isfinite(mass):
            raise CorpusParseError(f"Mass must be finite, got {text}", line_num)
        return mass


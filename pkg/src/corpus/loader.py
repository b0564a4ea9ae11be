"""
Corpus loading.

Reads corpus files (with encoding fallback), parses and validates them and
builds the domain objects. Focal masses that sum below one leave the
remainder on the whole frame.
"""

import logging
import math
from importlib import resources
from pathlib import Path
from typing import ClassVar

from pydantic import ValidationError

from src.belief import Evidence, FocalElement, Frame
from src.belief.evidence import MASS_TOLERANCE
from src.corpus.parser import CorpusDocument, CorpusParseError, CorpusParser, EvidenceSection
from src.corpus.validator import CorpusValidationError, CorpusValidator
from src.models import Corpus, DomainDistribution

logger = logging.getLogger(__name__)

# Name shown to users -> file in src/corpora
BUNDLED_CORPORA: dict[str, str] = {
    "baker-street": "baker_street.corpus",
    "two-witnesses": "two_witnesses.corpus",
}


class CorpusLoader:
    """Turns corpus text into a validated Corpus."""

    # Encodings to try in order of preference
    ENCODINGS: ClassVar[tuple[str, ...]] = ("utf-8-sig", "latin-1")

    def __init__(self, tolerance: float = MASS_TOLERANCE):
        self.tolerance = tolerance
        self._parser = CorpusParser()
        self._validator = CorpusValidator(tolerance)

    def load(self, file_path: Path) -> Corpus:
        """
        Load a corpus file.

        Raises:
            CorpusParseError: If the file cannot be read or parsed.
            CorpusValidationError: If the corpus breaks a validation rule.
        """
        return self.loads(self.read_text(file_path))

    def loads(self, content: str) -> Corpus:
        """Load a corpus from text."""
        document = self._parser.parse(content)
        self._validator.validate_or_raise(document)
        return self.build(document)

    def read_text(self, file_path: Path) -> str:
        """
        Read file content with encoding fallback.

        Raises:
            CorpusParseError: If the file is missing or no encoding works.
        """
        if not file_path.is_file():
            raise CorpusParseError(f"Corpus file not found: {file_path}")

        last_error: Exception | None = None
        for encoding in self.ENCODINGS:
            try:
                return file_path.read_text(encoding=encoding)
            except UnicodeDecodeError as e:
                last_error = e
                continue

        raise CorpusParseError(
            f"Could not decode {file_path} with any supported encoding: {self.ENCODINGS}"
        ) from last_error

    def build(self, document: CorpusDocument) -> Corpus:
        """
        Build domain objects from a validated document.

        Raises:
            CorpusValidationError: If a model invariant still fails.
        """
        context = {"tolerance": self.tolerance}
        try:
            frame = Frame(action_atoms=document.actions, event_labels=document.events)
            distribution = DomainDistribution.model_validate(
                {"masses": {entry.count: entry.mass for entry in document.distribution}},
                context=context,
            )
            evidences = tuple(self._build_evidence(section, frame) for section in document.evidences)
            corpus = Corpus.model_validate(
                {
                    "title": document.title,
                    "frame": frame,
                    "distribution": distribution,
                    "evidences": evidences,
                },
                context=context,
            )
        except ValidationError as e:
            raise CorpusValidationError([err["msg"] for err in e.errors()]) from e

        logger.info("Loaded corpus %r with %d evidences", corpus.title, len(corpus.evidences))
        return corpus

    def _build_evidence(self, section: EvidenceSection, frame: Frame) -> Evidence:
        masses: dict[FocalElement, float] = {}
        for line in section.focals:
            focal = frame.focal(line.actions, line.events)
            masses[focal] = masses.get(focal, 0.0) + line.mass

        deficit = 1.0 - math.fsum(masses.values())
        if deficit > self.tolerance:
            theta = frame.theta()
            masses[theta] = masses.get(theta, 0.0) + deficit

        return Evidence.model_validate(
            {"id": section.evidence_id, "frame": frame, "focals": tuple(masses.items())},
            context={"tolerance": self.tolerance},
        )


def load_corpus(path: Path, tolerance: float = MASS_TOLERANCE) -> Corpus:
    """Load and validate a corpus file."""
    return CorpusLoader(tolerance).load(path)


def bundled_corpus_text(name: str) -> str:
    """
    Text of a bundled corpus.

    Raises:
        CorpusParseError: If no corpus of that name is bundled.
    """
    if name not in BUNDLED_CORPORA:
        raise CorpusParseError(
            f"Unknown bundled corpus {name!r}; available: {', '.join(BUNDLED_CORPORA)}"
        )
    return resources.files("src.corpora").joinpath(BUNDLED_CORPORA[name]).read_text("utf-8")


def load_bundled(name: str, tolerance: float = MASS_TOLERANCE) -> Corpus:
    return CorpusLoader(tolerance).loads(bundled_corpus_text(name))

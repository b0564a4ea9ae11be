"""
Corpus serialization.

Writes a Corpus back in the text format. Masses use ``repr`` so reloading
gives the same floats, and the whole-frame mass is written explicitly.
"""

from pathlib import Path

from src.models import Corpus


class CorpusWriter:
    """Serializes corpora to the corpus text format."""

    def serialize(self, corpus: Corpus) -> str:
        lines: list[str] = []
        if corpus.title:
            lines += ["[corpus]", f"title = {corpus.title}", ""]

        lines += [
            "[frame]",
            f"actions = {', '.join(corpus.frame.action_atoms)}",
            f"events = {', '.join(corpus.frame.event_labels)}",
            "",
            "[distribution]",
        ]
        lines += [f"{count} = {mass!r}" for count, mass in corpus.distribution.masses.items()]

        for evidence in corpus.evidences:
            lines += ["", f"[evidence {evidence.id}]"]
            lines += [f"{focal.describe()} = {mass!r}" for focal, mass in evidence.focals]

        return "\n".join(lines) + "\n"

    def save(self, corpus: Corpus, output_path: Path) -> Path:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(self.serialize(corpus), encoding="utf-8")
        return output_path


def corpus_hash(corpus: Corpus) -> str:
    """SHA-256 of the canonical text of a corpus."""
    return Corpus.compute_hash(CorpusWriter().serialize(corpus))

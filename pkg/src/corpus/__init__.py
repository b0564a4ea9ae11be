"""
Corpus Module.

Parsing, validation, loading and writing of corpus files.
"""

from src.corpus.loader import (
    BUNDLED_CORPORA,
    CorpusLoader,
    bundled_corpus_text,
    load_bundled,
    load_corpus,
)
from src.corpus.parser import CorpusDocument, CorpusParseError, CorpusParser
from src.corpus.validator import CorpusValidationError, CorpusValidator
from src.corpus.writer import CorpusWriter, corpus_hash

__all__ = [
    "BUNDLED_CORPORA",
    "CorpusDocument",
    "CorpusLoader",
    "CorpusParseError",
    "CorpusParser",
    "CorpusValidationError",
    "CorpusValidator",
    "CorpusWriter",
    "bundled_corpus_text",
    "corpus_hash",
    "load_bundled",
    "load_corpus",
]

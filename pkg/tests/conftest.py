"""
Pytest configuration and fixtures.

Provides common test fixtures for all test modules.
"""

import random
import tempfile
from collections.abc import Callable, Generator
from pathlib import Path

import pytest

from src.belief import Evidence, FocalElement, Frame
from src.config import Settings
from src.corpus import bundled_corpus_text, load_bundled
from src.models import Corpus, DomainDistribution

RandomCorpus = tuple[list[Evidence], DomainDistribution]


# ==============================================================================
# Directory Fixtures
# ==============================================================================


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def fixtures_dir() -> Path:
    """Return the path to the test fixtures directory."""
    return Path(__file__).parent / "fixtures"


# ==============================================================================
# Baker Street Fixtures
# ==============================================================================


@pytest.fixture
def baker_frame() -> Frame:
    """Brown-haired outsider/insider and red-haired, two possible burglaries."""
    return Frame(action_atoms=("BO", "BI", "R"), event_labels=("E1", "E2"))


@pytest.fixture
def baker_evidences(baker_frame: Frame) -> list[Evidence]:
    """The four witness statements."""
    f = baker_frame
    return [
        Evidence.simple_support("e1", f, f.focal(["BO"], ["E1"]), 0.8),
        Evidence.simple_support("e2", f, f.focal(["BI"], ["E1", "E2"]), 0.7),
        Evidence.simple_support("e3", f, f.focal(["R"], ["E2"]), 0.6),
        Evidence.simple_support("e4", f, f.focal(["BO", "BI"], ["E1", "E2"]), 0.5),
    ]


@pytest.fixture
def baker_distribution() -> DomainDistribution:
    """One burglary with 0.6, two with 0.4."""
    return DomainDistribution(masses={1: 0.6, 2: 0.4})


@pytest.fixture
def baker_corpus() -> Corpus:
    """The bundled Baker Street corpus."""
    return load_bundled("baker-street")


@pytest.fixture
def baker_corpus_file(temp_dir: Path) -> Path:
    """The Baker Street corpus written to a file."""
    file_path = temp_dir / "baker_street.corpus"
    file_path.write_text(bundled_corpus_text("baker-street"), encoding="utf-8")
    return file_path


# ==============================================================================
# Settings Fixtures
# ==============================================================================


@pytest.fixture
def test_settings() -> Settings:
    """Create test settings with defaults independent of the environment."""
    return Settings(
        mass_tolerance=1e-9,
        improvement_threshold=1e-12,
        iteration_cap_factor=10,
        quotient_workers=1,
        precombine_specific=True,
        oracle_max_evidences=10,
        oracle_max_selections=10_000_000,
        log_level="WARNING",
    )


# ==============================================================================
# Random Corpus Fixtures
# ==============================================================================


def random_frame(rng: random.Random, max_actions: int = 4, max_events: int = 3) -> Frame:
    return Frame(
        action_atoms=tuple(f"a{i}" for i in range(rng.randint(1, max_actions))),
        event_labels=tuple(f"E{i}" for i in range(1, rng.randint(1, max_events) + 1)),
    )


def random_evidence(
    rng: random.Random,
    evidence_id: str,
    frame: Frame,
    with_theta: bool = True,
    action_mask: int | None = None,
) -> Evidence:
    """One or two random focal elements, optionally plus Θ; at most three focals."""
    mask = frame.action_mask if action_mask is None else action_mask
    weights: dict[FocalElement, float] = {}
    for _ in range(rng.randint(1, 2)):
        actions = 0
        while actions == 0:
            actions = rng.randint(1, frame.action_mask) & mask
        focal = FocalElement(actions, rng.randint(1, frame.event_mask), frame)
        weights[focal] = weights.get(focal, 0.0) + rng.uniform(0.05, 1.0)
    if with_theta:
        theta = frame.theta()
        weights[theta] = weights.get(theta, 0.0) + rng.uniform(0.05, 1.0)

    total = sum(weights.values())
    return Evidence(
        id=evidence_id,
        frame=frame,
        focals=tuple((focal, weight / total) for focal, weight in weights.items()),
    )


def random_distribution(rng: random.Random, n: int) -> DomainDistribution:
    counts = rng.sample(range(1, n + 1), rng.randint(1, min(n, 3)))
    weights = {count: rng.uniform(0.05, 1.0) for count in counts}
    total = sum(weights.values())
    return DomainDistribution(masses={count: w / total for count, w in weights.items()})


@pytest.fixture
def evidence_factory() -> Callable[..., Evidence]:
    """Factory for single random evidences, see ``random_evidence``."""
    return random_evidence


@pytest.fixture
def corpus_factory() -> Callable[..., RandomCorpus]:
    """Factory for random corpora: up to 7 evidences, 4 actions, 3 events."""

    def make(rng: random.Random, n: int | None = None) -> RandomCorpus:
        frame = random_frame(rng)
        size = n if n is not None else rng.randint(1, 7)
        evidences = [random_evidence(rng, f"e{k + 1}", frame) for k in range(size)]
        return evidences, random_distribution(rng, size)

    return make

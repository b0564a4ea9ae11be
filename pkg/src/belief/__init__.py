"""
Belief Function Module.

Frames, focal elements, mass functions and Dempster combination with
conflict tracking.
"""

from src.belief.combination import (
    CombinationError,
    CombinedState,
    ImpossibleEvidenceError,
    combine,
    fold,
    precombine_specific,
    subset_conflict,
)
from src.belief.evidence import MASS_TOLERANCE, Evidence
from src.belief.focal import FocalElement, Frame, FrameMismatchError, intersect

__all__ = [
    "MASS_TOLERANCE",
    "CombinationError",
    "CombinedState",
    "Evidence",
    "FocalElement",
    "Frame",
    "FrameMismatchError",
    "ImpossibleEvidenceError",
    "combine",
    "fold",
    "intersect",
    "precombine_specific",
    "subset_conflict",
]

"""
Frames of discernment and focal elements.

A proposition has an action part (what happened) and an event part (which
event it concerns). The frame is the product of the action atoms and the
event labels, and a focal element is an (action set, event set) pair stored
as two bitmasks. An intersection is empty when either component is empty:
conflicting actions and conflicting event references both land on the
empty set through the same rule.
"""

import re
from collections.abc import Iterable
from dataclasses import dataclass, field

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator

MAX_FRAME_SIZE = 64

# Everything the corpus grammar uses as punctuation is excluded from names
NAME_PATTERN = re.compile(r"^[^\s,@=*#\[\]]+$")

ALL = "*"


class FrameMismatchError(ValueError):
    """Raised when focal elements or evidences from different frames meet."""

    def __init__(self, message: str = "Focal elements belong to different frames"):
        super().__init__(message)


class Frame(BaseModel):
    """
    The frame of discernment: action atoms crossed with event labels.

    Both lists are capped at 64 entries so each component fits a machine word.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    action_atoms: tuple[str, ...] = Field(
        ...,
        min_length=1,
        max_length=MAX_FRAME_SIZE,
        description="Ordered atomic action hypotheses",
    )

    event_labels: tuple[str, ...] = Field(
        ...,
        min_length=1,
        max_length=MAX_FRAME_SIZE,
        description="Labels of the distinguishable events E_1..E_max",
    )

    @field_validator("action_atoms", "event_labels")
    @classmethod
    def validate_names(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        """Names must be nonempty tokens and unique."""
        for name in v:
            if not NAME_PATTERN.match(name):
                raise ValueError(f"Invalid name {name!r}: names are nonempty tokens without ',@=*#[]'")
        if len(set(v)) != len(v):
            duplicates = sorted({n for n in v if v.count(n) > 1})
            raise ValueError(f"Duplicate names found: {duplicates}")
        return v

    @computed_field  # type: ignore[prop-decorator]
    @property
    def event_count_max(self) -> int:
        """Maximum number of distinguishable events."""
        return len(self.event_labels)

    @property
    def action_mask(self) -> int:
        return (1 << len(self.action_atoms)) - 1

    @property
    def event_mask(self) -> int:
        return (1 << len(self.event_labels)) - 1

    def theta(self) -> "FocalElement":
        """The full element: every action and every event."""
        return FocalElement(self.action_mask, self.event_mask, self)

    def focal(self, actions: Iterable[str] | str, events: Iterable[str] | str) -> "FocalElement":
        """
        Build a focal element from names.

        Args:
            actions: Action atom names, or ``"*"`` for all atoms.
            events: Event labels, or ``"*"`` for all events.

        Raises:
            ValueError: If a name is not declared in the frame.
        """
        return FocalElement(
            _to_mask(actions, self.action_atoms, "action"),
            _to_mask(events, self.event_labels, "event"),
            self,
        )

    def action_names(self, mask: int) -> tuple[str, ...]:
        return tuple(name for i, name in enumerate(self.action_atoms) if mask >> i & 1)

    def event_names(self, mask: int) -> tuple[str, ...]:
        return tuple(label for i, label in enumerate(self.event_labels) if mask >> i & 1)


def _to_mask(names: Iterable[str] | str, universe: tuple[str, ...], kind: str) -> int:
    if isinstance(names, str):
        if names.strip() == ALL:
            return (1 << len(universe)) - 1
        names = [names]
    index = {name: i for i, name in enumerate(universe)}
    mask = 0
    for name in names:
        if name == ALL:
            return (1 << len(universe)) - 1
        if name not in index:
            raise ValueError(f"Unknown {kind} {name!r}; declared: {', '.join(universe)}")
        mask |= 1 << index[name]
    return mask


@dataclass(frozen=True, slots=True)
class FocalElement:
    """
    An (action set, event set) pair over a frame.

    Equality and hashing use the two bitmasks only; the frame rides along
    so that intersections can refuse to mix frames.
    """

    actions: int
    events: int
    frame: Frame = field(compare=False, repr=False)

    @property
    def is_empty(self) -> bool:
        return self.actions == 0 or self.events == 0

    @property
    def is_theta(self) -> bool:
        return self.actions == self.frame.action_mask and self.events == self.frame.event_mask

    @property
    def sort_key(self) -> tuple[int, int]:
        """Canonical ordering used for every focal map."""
        return (self.actions, self.events)

    def issubset(self, other: "FocalElement") -> bool:
        return self.actions & ~other.actions == 0 and self.events & ~other.events == 0

    def describe(self) -> str:
        """Render as ``actions @ events`` with ``*`` for a full component."""
        if self.actions == self.frame.action_mask:
            actions = ALL
        else:
            actions = ", ".join(self.frame.action_names(self.actions)) or "{}"
        if self.events == self.frame.event_mask:
            events = ALL
        else:
            events = ", ".join(self.frame.event_names(self.events)) or "{}"
        return f"{actions} @ {events}"


def same_frame(a: Frame, b: Frame) -> bool:
    return a is b or a == b


def intersect(a: FocalElement, b: FocalElement) -> FocalElement:
    """
    Componentwise intersection of two focal elements.

    The result may be empty (see ``FocalElement.is_empty``); callers decide
    whether that mass becomes conflict.

    Raises:
        FrameMismatchError: If the elements come from different frames.
    """
    if not same_frame(a.frame, b.frame):
        raise FrameMismatchError()
    return FocalElement(a.actions & b.actions, a.events & b.events, a.frame)

"""
Evidence as a mass function over a product frame.

Masses are positive, sum to one and sit on nonempty, distinct focal
elements. Focals are kept in canonical order so that every fold over an
evidence visits them in the same sequence.
"""

import math
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, model_validator

from src.belief.focal import FocalElement, Frame, same_frame

MASS_TOLERANCE = 1e-9


def tolerance_from(info: ValidationInfo) -> float:
    """Read a tolerance override from the pydantic validation context."""
    context: dict[str, Any] = info.context or {}
    return float(context.get("tolerance", MASS_TOLERANCE))


class Evidence(BaseModel):
    """
    One piece of evidence: an identifier plus its focal elements and masses.

    A tolerance other than 1e-9 can be passed through the validation
    context: ``Evidence.model_validate(data, context={"tolerance": 1e-6})``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    id: str = Field(
        ...,
        min_length=1,
        description="Unique label of the evidence",
    )

    frame: Frame = Field(
        ...,
        description="Frame the focal elements are drawn from",
    )

    focals: tuple[tuple[FocalElement, float], ...] = Field(
        ...,
        min_length=1,
        description="Focal elements with their masses",
    )

    @model_validator(mode="after")
    def validate_mass_function(self, info: ValidationInfo) -> "Evidence":
        """Check the mass function invariants and sort the focals canonically."""
        tolerance = tolerance_from(info)
        seen: set[FocalElement] = set()
        for focal, mass in self.focals:
            if not same_frame(focal.frame, self.frame):
                raise ValueError(f"Evidence {self.id!r}: focal element from a different frame")
            if focal.is_empty:
                raise ValueError(f"Evidence {self.id!r}: focal element {focal.describe()} is empty")
            if not 0.0 < mass <= 1.0:
                raise ValueError(f"Evidence {self.id!r}: mass {mass} outside (0, 1]")
            if focal in seen:
                raise ValueError(f"Evidence {self.id!r}: focal element {focal.describe()} listed twice")
            seen.add(focal)

        total = math.fsum(mass for _, mass in self.focals)
        if abs(total - 1.0) > tolerance:
            raise ValueError(f"Evidence {self.id!r}: masses sum to {total}, expected 1")

        # Use object.__setattr__ because model is frozen
        ordered = tuple(sorted(self.focals, key=lambda pair: pair[0].sort_key))
        object.__setattr__(self, "focals", ordered)
        return self

    @classmethod
    def simple_support(
        cls, evidence_id: str, frame: Frame, focal: FocalElement, support: float
    ) -> "Evidence":
        """Build ``{(focal, support), (Θ, 1 - support)}``."""
        if focal.is_theta or support == 1.0:
            return cls(id=evidence_id, frame=frame, focals=((focal, 1.0),))
        return cls(
            id=evidence_id,
            frame=frame,
            focals=((focal, support), (frame.theta(), 1.0 - support)),
        )

    @classmethod
    def vacuous(cls, evidence_id: str, frame: Frame) -> "Evidence":
        """Total ignorance: all mass on Θ."""
        return cls(id=evidence_id, frame=frame, focals=((frame.theta(), 1.0),))

    def mass_of(self, focal: FocalElement) -> float:
        for candidate, mass in self.focals:
            if candidate == focal:
                return mass
        return 0.0

    @property
    def is_simple_support(self) -> bool:
        return sum(1 for focal, _ in self.focals if not focal.is_theta) == 1

    @property
    def event_reference(self) -> int:
        """Union of the event parts of the non-Θ focals (0 for vacuous evidence)."""
        mask = 0
        for focal, _ in self.focals:
            if not focal.is_theta:
                mask |= focal.events
        return mask

    def specific_event(self) -> int | None:
        """
        The single event this evidence certainly refers to, if any.

        Returns the event bitmask when every non-Θ focal carries the same
        singleton event part, else None.
        """
        events = {focal.events for focal, _ in self.focals if not focal.is_theta}
        if len(events) != 1:
            return None
        (mask,) = events
        return mask if mask & (mask - 1) == 0 else None

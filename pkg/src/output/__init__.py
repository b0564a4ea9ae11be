"""
Output Module.

Report building and rendering.
"""

from src.output.report import (
    ReportBuilder,
    ReportFormat,
    ReportGenerator,
    compare_with_oracle,
    describe_step,
    subset_events,
)

__all__ = [
    "ReportBuilder",
    "ReportFormat",
    "ReportGenerator",
    "compare_with_oracle",
    "describe_step",
    "subset_events",
]

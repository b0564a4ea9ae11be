"""
Configuration management for the Metaconflict Partitioner.

Uses Pydantic Settings for type-safe configuration loading from environment variables.
All configuration is validated at startup to fail fast on misconfiguration.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    Every variable is prefixed with ``METACONFLICT_`` (for example
    ``METACONFLICT_QUOTIENT_WORKERS=4``). Values may also come from a
    ``.env`` file in the working directory.
    """

    model_config = SettingsConfigDict(
        env_prefix="METACONFLICT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ==========================================================================
    # Numerical Configuration
    # ==========================================================================
    mass_tolerance: float = Field(
        default=1e-9,
        gt=0.0,
        le=1e-3,
        description="Absolute tolerance for mass sums and distribution sums",
    )

    improvement_threshold: float = Field(
        default=1e-12,
        ge=0.0,
        le=1e-6,
        description="Margin by which a target quotient must undercut the home quotient",
    )

    # ==========================================================================
    # Search Configuration
    # ==========================================================================
    iteration_cap_factor: int = Field(
        default=10,
        ge=1,
        le=1000,
        description="Local search stops after factor * n^2 transfers",
    )

    quotient_workers: int = Field(
        default=1,
        ge=1,
        le=64,
        description="Threads used to evaluate the per-evidence quotient table",
    )

    precombine_specific: bool = Field(
        default=True,
        description="Combine evidences specific to the same event before solving",
    )

    # ==========================================================================
    # Oracle Configuration
    # ==========================================================================
    oracle_max_evidences: int = Field(
        default=10,
        ge=1,
        le=12,
        description="Largest corpus the exhaustive partition search accepts",
    )

    oracle_max_selections: int = Field(
        default=10_000_000,
        ge=1,
        description="Largest focal selection space the enumeration conflict accepts",
    )

    # ==========================================================================
    # Output Configuration
    # ==========================================================================
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="WARNING",
        description="Log level for the command-line application",
    )


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Uses LRU cache to ensure settings are only loaded once.
    """
    return Settings()

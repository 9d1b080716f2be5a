"""
Application settings using Pydantic BaseSettings.

This module defines the settings that can be set via environment
variables (prefix ``UPBBELL_``) or a ``.env`` file.
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # Backtracking limits
    search_node_cap: int = Field(
        default=10_000_000,
        description="Maximum number of nodes visited by completion and UPB searches",
    )

    # Randomized paths (restarts, random realizations, random weights)
    default_seed: int = Field(
        default=20130917,
        description="Seed used when a command is not given --seed",
    )
    witness_restarts: int = Field(
        default=32,
        description="Random restarts for the product-state minimization of <psi|Pi_U|psi>",
    )

    # Numeric tolerances
    orthogonality_tolerance: float = Field(
        default=1e-12,
        description="Tolerance for realized inner products and Hermiticity",
    )
    spectrum_tolerance: float = Field(
        default=1e-9,
        description="Tolerance for spectra, box constraints and PPT checks",
    )

    rank_prime: int = Field(
        default=2147483647,
        description="Prime modulus for the modular rank prefilter, below 2**31",
    )

    # Persistent run log
    run_log_enabled: bool = Field(
        default=False,
        description="Append one JSON record per command failure or event",
    )
    run_log_path: str = Field(
        default="upbbell-runs.jsonl",
        description="Path of the JSON-lines run log",
    )

    log_level: str = Field(default="INFO", description="Root logging level for the CLI")

    @field_validator("witness_restarts")
    @classmethod
    def validate_restarts(cls, v):
        """At least 32 restarts keep the global minimum estimate meaningful."""
        if v < 32:
            raise ValueError("witness_restarts must be at least 32")
        return v

    @field_validator("rank_prime")
    @classmethod
    def validate_rank_prime(cls, v):
        """Products of two residues must fit in int64."""
        if v < 2 or v >= 2**31:
            raise ValueError("rank_prime must lie in [2, 2**31)")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Normalize level name to uppercase."""
        return v.upper()

    model_config = {
        "env_file": ".env",
        "env_prefix": "UPBBELL_",
        "case_sensitive": False,
        "extra": "allow",
    }


# Create a singleton instance of the settings
settings = Settings()


def get_settings() -> Settings:
    """
    Get the application settings.

    Services call this instead of reading the singleton directly so tests
    can monkeypatch it.

    Returns:
        The application settings
    """
    return settings

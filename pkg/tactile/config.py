"""
Application Configuration

Pydantic settings management for the tactile active inference toolkit.
All configuration is loaded from environment variables.
"""

from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    debug: bool = Field(default=False, description="Enable tensor finiteness assertions")
    log_level: str = Field(default="INFO", description="Logging level")

    # Storage paths
    output_base_path: str = Field(default="./runs", description="Root directory for run outputs")

    # Reproducibility
    master_seed: int = Field(default=0, ge=0, description="Master seed for experiment runs")

    # Tactile image geometry
    image_width: int = Field(default=64, ge=8, le=1024, description="Tactile image width in pixels")
    image_height: int = Field(
        default=48, ge=8, le=1024, description="Tactile image height in pixels"
    )

    # Execution
    max_concurrent_runs: int = Field(
        default=1, ge=1, le=64, description="Maximum per-peg or per-scenario tasks in flight"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v = v.upper()
        if v not in allowed:
            raise ValueError(f"log_level must be one of {allowed}")
        return v

    @property
    def image_shape(self) -> tuple[int, int]:
        """Image shape as (height, width)."""
        return self.image_height, self.image_width


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()

"""
Imaging Schemas

Pydantic schemas for tactile image augmentation.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class AugmentConfig(BaseModel):
    """Schema for self-data augmentation of a straight-pose image."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    count: int = Field(500, ge=1, description="Number of labeled samples to generate")
    tilt_range_deg: Tuple[float, float] = Field(
        (-20.0, 20.0), description="Closed tilt interval in degrees"
    )
    rng_seed: int = Field(0, ge=0, lt=2**64, description="Seed of the tilt sampler")

    @model_validator(mode="after")
    def validate_range(self) -> "AugmentConfig":
        """Validate tilt range ordering."""
        low, high = self.tilt_range_deg
        if low > high:
            raise ValueError(f"tilt_range_deg lower bound {low} exceeds upper bound {high}")
        return self

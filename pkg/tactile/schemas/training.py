"""
Training Schemas

Pydantic schemas for network training and decoder architecture.
"""

from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class TrainingConfig(BaseModel):
    """Schema for minibatch training of a network."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    epochs: int = Field(5, ge=1, description="Training epochs")
    optimizer: Literal["adam", "sgd"] = Field("adam", description="Parameter update rule")
    learning_rate: float = Field(2e-3, gt=0, description="Optimizer learning rate")
    batch_size: int = Field(4, ge=1, le=1024, description="Samples per update")
    seed: int = Field(0, ge=0, description="Seed for initialization, shuffling and dropout")
    anchor_tolerance: Optional[float] = Field(
        None, gt=0, description="Largest accepted decoder MAE at tilt 0; None skips the check"
    )
    min_sensitivity: Optional[float] = Field(
        3e-3,
        gt=0,
        description="Smallest accepted max |dg/dmu| per degree; None skips the check",
    )
    max_restarts: int = Field(3, ge=0, description="Reseeded retrainings of a collapsed decoder")


class DecoderConfig(BaseModel):
    """Schema for the generative decoder architecture."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    latent_dim: int = Field(1, description="Internal state dimension")
    hidden_units: int = Field(64, ge=1, description="Width of the first fully connected layer")
    channels: Tuple[int, int, int] = Field(
        (16, 16, 8), description="Channels after each upsampling stage"
    )
    dropout_rate: float = Field(0.1, ge=0.0, lt=1.0, description="Dropout after the dense stack")
    activation: Literal["softplus", "relu", "tanh"] = Field(
        "tanh", description="Hidden activation"
    )
    input_scale_deg: float = Field(20.0, gt=0, description="Degrees mapped to a unit input")
    init_gain: float = Field(
        3.0**0.5, gt=0, description="Weight init bound multiplier of the dense and conv layers"
    )

    @field_validator("latent_dim")
    @classmethod
    def validate_latent_dim(cls, v: int) -> int:
        """Only a scalar internal state is supported."""
        if v != 1:
            raise ValueError("latent_dim must be 1")
        return v

    @field_validator("channels")
    @classmethod
    def validate_channels(cls, v: Tuple[int, int, int]) -> Tuple[int, int, int]:
        """Validate channel counts."""
        if any(c < 1 for c in v):
            raise ValueError("channels must be positive")
        return v

"""
Policy Schemas

Pydantic schemas for the dual-policy controller and insertion scenarios.
"""

import math

from pydantic import BaseModel, ConfigDict, Field

from tactile.schemas.imaging import AugmentConfig
from tactile.schemas.inference import InferenceConfig
from tactile.schemas.training import DecoderConfig, TrainingConfig
from tactile.schemas.world import (
    ControllerGains,
    DynamicsConfig,
    HoleSpec,
    PegSpec,
    SlippageConfig,
)


class PolicyConfig(BaseModel):
    """Schema for switching between insertion and alignment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mu_action_threshold: float = Field(
        1.0, gt=0, description="Belief magnitude (deg) required before acting; inf disables"
    )
    theta_switch_threshold: float = Field(
        0.7, gt=0, description="Estimated relative angle (deg) that triggers alignment"
    )
    inference_period: int = Field(10, ge=1, description="Control ticks between belief refreshes")
    max_episode_steps: int = Field(300, ge=1, description="Episode length limit in ticks")
    initial_inference_iters: int = Field(
        1000, ge=1, description="Iteration budget of every runtime inference"
    )
    insertion_force_n: float = Field(5.0, gt=0, description="Downward force target")
    warm_start: bool = Field(False, description="Start refreshes from the previous belief")

    @property
    def alignment_enabled(self) -> bool:
        """Whether any alignment action can ever be taken."""
        return math.isfinite(self.mu_action_threshold)


class Scenario(BaseModel):
    """Schema for one insertion scenario (peg, hole and every controller setting)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1, max_length=64)
    peg: PegSpec
    hole: HoleSpec
    gains: ControllerGains = Field(default_factory=ControllerGains)
    dynamics: DynamicsConfig = Field(default_factory=DynamicsConfig)
    slippage: SlippageConfig = Field(default_factory=SlippageConfig)
    policy: PolicyConfig = Field(default_factory=PolicyConfig)
    inference: InferenceConfig = Field(default_factory=lambda: InferenceConfig(max_iters=1000))
    augment: AugmentConfig = Field(
        default_factory=lambda: AugmentConfig(count=1000, tilt_range_deg=(-10.0, 10.0))
    )
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    decoder: DecoderConfig = Field(default_factory=DecoderConfig)
    master_seed: int = Field(0, ge=0)
    straight_pose_seed: int = Field(0, ge=0, description="Noise seed of the straight-pose image")

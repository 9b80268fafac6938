"""
Experiment Schemas

Pydantic schema of the versioned experiment config file.
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sim.rendering import NOISE_LEVELS, PEG_PRESETS
from tactile.schemas import (
    AugmentConfig,
    DecoderConfig,
    InferenceConfig,
    PolicyConfig,
    TrainingConfig,
)

ExperimentKind = Literal["perception", "dual-policy", "grad-check", "calibrate-dt", "render"]
NoiseLevel = Literal["none", "low", "high", "default"]
ScenarioName = Literal["cuboid", "pulley"]


class CalibrationConfig(BaseModel):
    """Schema for the step-size sweep."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dt_min: float = Field(1e-8, gt=0, description="Smallest step size tried")
    dt_max: float = Field(1e-2, gt=0, description="Largest step size tried")
    num_steps: int = Field(13, ge=1, le=200, description="Log-spaced candidates")
    reference_peg: str = Field("cuboid", description="Peg whose decoder is calibrated")
    tilts_deg: Tuple[float, ...] = Field((-10.0, -5.0, 5.0, 10.0), min_length=1)
    tolerance_deg: float = Field(1.5, gt=0, description="Allowed recovery error")
    max_increase_fraction: float = Field(
        0.01, ge=0, le=1, description="Share of free-energy increases tolerated in the tail"
    )

    @model_validator(mode="after")
    def validate_bounds(self) -> "CalibrationConfig":
        """Validate sweep bounds."""
        if self.dt_min > self.dt_max:
            raise ValueError("dt_min exceeds dt_max")
        return self


class GradCheckConfig(BaseModel):
    """Schema for the gradient verification run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    instances: int = Field(20, ge=1, le=1000, description="Random networks per architecture")
    epsilon: float = Field(1e-4, gt=0, description="Finite-difference step")
    layer_tolerance: float = Field(1e-4, gt=0)
    derivative_tolerance: float = Field(1e-3, gt=0)


class ExperimentConfig(BaseModel):
    """Schema of one experiment run (config file schema_version 1)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: Literal[1] = 1
    kind: ExperimentKind
    master_seed: int = Field(0, ge=0)
    output_dir: Optional[str] = Field(None, description="Defaults to OUTPUT_BASE_PATH")

    # Perception
    pegs: List[str] = Field(default_factory=lambda: list(PEG_PRESETS), min_length=1)
    noise_level: NoiseLevel = "default"
    augment: AugmentConfig = Field(default_factory=AugmentConfig)
    epochs: int = Field(5, ge=1)
    test_count: int = Field(100, ge=1)
    test_tilt_range_deg: Tuple[float, float] = (-20.0, 20.0)
    write_traces: bool = Field(False, description="Dump inference traces per test image")
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    decoder: DecoderConfig = Field(default_factory=DecoderConfig)
    inference: InferenceConfig = Field(default_factory=InferenceConfig)

    # Dual policy
    scenarios: List[ScenarioName] = Field(
        default_factory=lambda: ["cuboid", "pulley"], min_length=1
    )
    alignment: Literal["both", "on", "off"] = "both"
    policy: PolicyConfig = Field(default_factory=PolicyConfig)
    policy_augment: AugmentConfig = Field(
        default_factory=lambda: AugmentConfig(count=1000, tilt_range_deg=(-10.0, 10.0))
    )
    n_episodes: int = Field(40, ge=1)
    reposition_every: int = Field(10, ge=1)

    # Tooling
    calibration: CalibrationConfig = Field(default_factory=CalibrationConfig)
    grad_check: GradCheckConfig = Field(default_factory=GradCheckConfig)
    render_tilts_deg: Tuple[float, ...] = Field((-10.0, 0.0, 10.0), min_length=1)

    @field_validator("pegs")
    @classmethod
    def validate_pegs(cls, v: List[str]) -> List[str]:
        """Validate peg names against the presets."""
        unknown = [p for p in v if p not in PEG_PRESETS]
        if unknown:
            raise ValueError(f"Unknown pegs {unknown}, expected names from {sorted(PEG_PRESETS)}")
        if len(set(v)) != len(v):
            raise ValueError("pegs must not repeat")
        return v

    @field_validator("noise_level")
    @classmethod
    def validate_noise_level(cls, v: str) -> str:
        if v not in NOISE_LEVELS:
            raise ValueError(f"noise_level must be one of {list(NOISE_LEVELS)}")
        return v

    @model_validator(mode="after")
    def validate_ranges(self) -> "ExperimentConfig":
        """Validate interval ordering and the reference peg."""
        if self.test_tilt_range_deg[0] > self.test_tilt_range_deg[1]:
            raise ValueError("test_tilt_range_deg lower bound exceeds upper bound")
        if self.calibration.reference_peg not in PEG_PRESETS:
            raise ValueError(f"Unknown reference peg '{self.calibration.reference_peg}'")
        return self

"""
World Schemas

Pydantic schemas for pegs, holes, controller gains and simulator dynamics.
"""

from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Footprint = Literal["rectangle", "circle", "ellipse", "annulus", "rounded_rectangle"]
AxisPair = Tuple[float, float]


class PegSpec(BaseModel):
    """Schema for a grasped peg and its tactile contact footprint."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1, max_length=64)
    footprint: Footprint
    width_mm: float = Field(8.0, gt=0, description="Peg width, the engagement length")
    length_px: float = Field(..., gt=0, description="Footprint extent along the image x axis")
    breadth_px: float = Field(..., gt=0, description="Footprint extent along the image y axis")
    inner_px: float = Field(0.0, ge=0, description="Bore diameter (annulus only)")
    corner_radius_px: float = Field(0.0, ge=0, description="Corner radius (rounded rectangle)")
    offset_px: Tuple[float, float] = Field(
        (0.0, 0.0), description="Footprint center relative to the rotation center (x, y)"
    )
    edge_softness_px: float = Field(1.0, gt=0, description="Width of the contact border ramp")
    surface_noise: float = Field(0.0, ge=0.0, le=1.0, description="Contact-area noise level")

    @model_validator(mode="after")
    def validate_geometry(self) -> "PegSpec":
        """Validate footprint-specific dimensions."""
        if self.footprint == "annulus" and not 0 < self.inner_px < min(
            self.length_px, self.breadth_px
        ):
            raise ValueError("annulus needs 0 < inner_px < outer diameter")
        if self.corner_radius_px > min(self.length_px, self.breadth_px) / 2:
            raise ValueError("corner_radius_px exceeds half the footprint size")
        return self


class HoleSpec(BaseModel):
    """Schema for the target hole."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    clearance_mm: float = Field(..., gt=0, description="Radial gap between peg and hole")
    depth_mm: float = Field(5.0, gt=0, description="Depth required for a successful insertion")
    entry_position_mm: AxisPair = Field((0.0, 0.0), description="Hole entry (y, z)")


class ControllerGains(BaseModel):
    """Schema for the parallel position/force control law (per axis y, z)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kp_x: AxisPair = Field((2.0, 2.0), description="Proportional position gains")
    kd_x: AxisPair = Field((0.05, 0.05), description="Derivative position gains")
    kp_f: AxisPair = Field((0.5, 0.5), description="Proportional force gains")
    ki_f: AxisPair = Field((0.2, 0.2), description="Integral force gains")
    selection: AxisPair = Field((1.0, 0.0), description="Diagonal of the selection matrix S")
    residual: AxisPair = Field((0.0, 0.0), description="Residual position action a_x")

    @field_validator("selection")
    @classmethod
    def validate_selection(cls, v: AxisPair) -> AxisPair:
        """Validate selection matrix entries."""
        if any(not 0.0 <= s <= 1.0 for s in v):
            raise ValueError("selection entries must lie in [0, 1]")
        return v


class DynamicsConfig(BaseModel):
    """Schema for the quasi-static plant and contact model."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dt: float = Field(0.1, gt=0, description="Control tick in seconds")
    time_constant: float = Field(1.0, gt=0, description="First-order position response")
    contact_stiffness: float = Field(10.0, gt=0, description="Spring constant in N/mm")
    integral_limit: float = Field(50.0, gt=0, description="Anti-windup bound on the force integral")
    start_height_mm: float = Field(15.0, description="Nominal start height above the hole")
    position_range_mm: float = Field(10.0, ge=0, description="Start position jitter in y and z")


class SlippageConfig(BaseModel):
    """Schema for in-hand slippage of the peg."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    grasp_range_deg: AxisPair = Field((-10.0, 10.0), description="Tilt drawn at episode start")
    contact_jitter_deg: AxisPair = Field((-2.0, 2.0), description="Tilt jitter while in contact")
    lateral_force_threshold_n: float = Field(
        2.0, ge=0, description="Lateral force that triggers in-contact jitter"
    )
    contact_slip_enabled: bool = Field(True, description="Apply in-contact jitter during episodes")

    @field_validator("grasp_range_deg", "contact_jitter_deg")
    @classmethod
    def validate_range(cls, v: AxisPair) -> AxisPair:
        """Validate interval ordering."""
        if v[0] > v[1]:
            raise ValueError("range lower bound exceeds upper bound")
        return v

"""
Inference Schemas

Pydantic schema for free-energy perceptual inference.
"""

from pydantic import BaseModel, ConfigDict, Field


class InferenceConfig(BaseModel):
    """Schema for the belief update and inference loop."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    precision_tac: float = Field(2e4, ge=0.0, description="Tactile precision (inverse variance)")
    prior_var_mu: float = Field(1e-2, gt=0.0, description="Prior variance of the tilt belief")
    prior_var_theta: float = Field(1.0, gt=0.0, description="Prior variance of the relative angle")
    step_dt: float = Field(1e-5, gt=0.0, description="Integration step of the belief update")
    max_iters: int = Field(500, ge=1, description="Maximum inference iterations")
    mu_init: float = Field(0.0, description="Initial belief in degrees")
    convergence_eps: float = Field(
        1e-3, ge=0.0, description="Early exit once the belief rate |mu_dot| is smaller"
    )
    record_trace: bool = Field(False, description="Keep the per-iteration (mu, F) history")

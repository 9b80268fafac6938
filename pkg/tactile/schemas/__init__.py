"""
Pydantic Schemas Package

Validated configuration types for the library and the simulator.
"""

from tactile.schemas.imaging import AugmentConfig
from tactile.schemas.inference import InferenceConfig
from tactile.schemas.policy import PolicyConfig, Scenario
from tactile.schemas.training import DecoderConfig, TrainingConfig
from tactile.schemas.world import (
    ControllerGains,
    DynamicsConfig,
    HoleSpec,
    PegSpec,
    SlippageConfig,
)

__all__ = [
    # Imaging
    "AugmentConfig",
    # Training
    "TrainingConfig",
    "DecoderConfig",
    # Inference
    "InferenceConfig",
    # World
    "PegSpec",
    "HoleSpec",
    "ControllerGains",
    "DynamicsConfig",
    "SlippageConfig",
    # Policy
    "PolicyConfig",
    "Scenario",
]

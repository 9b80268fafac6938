"""
Tests for the experiment config schema.
"""

import pytest
from pydantic import ValidationError

from harness.schemas import CalibrationConfig, ExperimentConfig


class TestExperimentConfig:
    """Tests for ExperimentConfig."""

    def test_defaults(self):
        """Test a minimal config."""
        cfg = ExperimentConfig(kind="perception")

        assert cfg.schema_version == 1
        assert len(cfg.pegs) == 5
        assert cfg.scenarios == ["cuboid", "pulley"]
        assert cfg.n_episodes == 40

    def test_unknown_kind(self):
        """Test kind validation."""
        with pytest.raises(ValidationError):
            ExperimentConfig(kind="benchmark")

    def test_unknown_schema_version(self):
        """Test that only version 1 is accepted."""
        with pytest.raises(ValidationError):
            ExperimentConfig(kind="render", schema_version=2)

    def test_empty_pegs(self):
        """Test that at least one peg is required."""
        with pytest.raises(ValidationError):
            ExperimentConfig(kind="perception", pegs=[])

    def test_unknown_peg(self):
        """Test peg name validation."""
        with pytest.raises(ValidationError, match="Unknown pegs"):
            ExperimentConfig(kind="perception", pegs=["cuboid", "hexagon"])

    def test_repeated_peg(self):
        """Test duplicate pegs."""
        with pytest.raises(ValidationError, match="repeat"):
            ExperimentConfig(kind="perception", pegs=["cuboid", "cuboid"])

    def test_unknown_scenario(self):
        """Test scenario names."""
        with pytest.raises(ValidationError):
            ExperimentConfig(kind="dual-policy", scenarios=["shaft"])

    def test_test_range_order(self):
        """Test tilt interval ordering."""
        with pytest.raises(ValidationError, match="test_tilt_range_deg"):
            ExperimentConfig(kind="perception", test_tilt_range_deg=(5.0, -5.0))

    def test_extra_fields_rejected(self):
        """Test that typos in config files fail loudly."""
        with pytest.raises(ValidationError):
            ExperimentConfig(kind="render", episodes=3)

    def test_nested_configs_parse(self):
        """Test nested dictionaries from JSON."""
        cfg = ExperimentConfig.model_validate(
            {
                "kind": "dual-policy",
                "policy": {"inference_period": 5},
                "inference": {"max_iters": 20},
            }
        )

        assert cfg.policy.inference_period == 5
        assert cfg.inference.max_iters == 20


class TestCalibrationConfig:
    """Tests for CalibrationConfig."""

    def test_bounds_order(self):
        """Test sweep bounds."""
        with pytest.raises(ValidationError, match="dt_min"):
            CalibrationConfig(dt_min=1e-2, dt_max=1e-4)

    def test_reference_peg(self):
        """Test reference peg validation."""
        with pytest.raises(ValidationError, match="reference peg"):
            ExperimentConfig(kind="calibrate-dt", calibration={"reference_peg": "hexagon"})

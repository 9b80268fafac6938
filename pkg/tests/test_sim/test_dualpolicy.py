"""
Tests for dual-policy episodes.
"""

import logging
import math
from unittest.mock import MagicMock

import pandas as pd
import pytest

from sim.dualpolicy import (
    EPISODE_LOG_COLUMNS,
    derive_seed,
    grasp_rng,
    run_episode,
    stream_rng,
)
from sim.rendering import get_peg
from sim.world import World
from tactile.schemas import ControllerGains, HoleSpec, InferenceConfig, PolicyConfig, SlippageConfig
from tactile.services.inference import BeliefState


@pytest.fixture
def world():
    """Noiseless cuboid world without in-contact slippage."""
    return World(
        get_peg("cuboid", "none"),
        HoleSpec(clearance_mm=0.08),
        slippage=SlippageConfig(contact_slip_enabled=False),
        image_shape=(48, 64),
    )


@pytest.fixture
def perfect_inference(mocker):
    """Inference that always returns the true grasp tilt of 8 degrees."""
    return mocker.patch(
        "sim.dualpolicy.perceptual_inference", return_value=BeliefState(mu=8.0)
    )


def _run(world, mu_true, policy=None, decoder=None, seed=0):
    return run_episode(
        world,
        world.initial_state((0.0, 15.0), mu_true=mu_true),
        decoder if decoder is not None else MagicMock(),
        ControllerGains(),
        InferenceConfig(),
        policy or PolicyConfig(),
        seed,
    )


class TestRunEpisode:
    """Tests for run_episode."""

    def test_single_alignment_then_success(self, world, perfect_inference):
        """Test an 8 degree grasp corrected once."""
        result = _run(world, 8.0)

        assert result.success
        assert result.alignments_performed == 1
        assert result.log[0].policy == "alignment"
        assert result.final_theta == 0.0

    def test_straight_grasp_needs_no_alignment(self, world, mocker):
        """Test that a straight grasp is inserted directly."""
        mocker.patch("sim.dualpolicy.perceptual_inference", return_value=BeliefState(mu=0.0))

        result = _run(world, 0.0)

        assert result.success
        assert result.alignments_performed == 0

    def test_small_belief_does_not_act(self, world, mocker):
        """Test the belief magnitude gate."""
        mocker.patch("sim.dualpolicy.perceptual_inference", return_value=BeliefState(mu=0.9))

        result = _run(world, 0.3)

        assert result.alignments_performed == 0
        assert result.success

    def test_disabled_alignment_jams(self, world):
        """Test that an uncorrected 8 degree grasp fails."""
        policy = PolicyConfig(mu_action_threshold=math.inf)

        result = run_episode(
            world,
            world.initial_state((0.0, 15.0), mu_true=8.0),
            None,
            ControllerGains(),
            InferenceConfig(),
            policy,
            0,
        )

        assert not result.success
        assert result.alignments_performed == 0
        assert result.steps == policy.max_episode_steps
        assert result.final_theta == 8.0

    def test_truncation_is_logged(self, world, caplog):
        """Test the warning on episodes that hit the step limit."""
        policy = PolicyConfig(mu_action_threshold=math.inf, max_episode_steps=5)

        with caplog.at_level(logging.WARNING, logger="sim.dualpolicy"):
            _run(world, 8.0, policy)

        assert "truncated after 5 steps" in caplog.text

    def test_decoder_required(self, world):
        """Test that alignment needs a decoder."""
        with pytest.raises(ValueError, match="decoder"):
            run_episode(
                world,
                world.initial_state((0.0, 15.0)),
                None,
                ControllerGains(),
                InferenceConfig(),
                PolicyConfig(),
                0,
            )

    def test_one_policy_per_tick(self, world, perfect_inference):
        """Test that every tick is either insertion or alignment."""
        result = _run(world, 8.0)

        assert [row.step for row in result.log] == list(range(result.steps))
        assert {row.policy for row in result.log} <= {"insertion", "alignment"}
        for row in result.log:
            assert row.theta == row.mu_true + row.phi_ee

    def test_inference_cadence(self, world, perfect_inference):
        """Test belief refreshes every inference_period ticks with the runtime budget."""
        policy = PolicyConfig(inference_period=10, max_episode_steps=25)

        _run(world, 8.0, policy)

        assert perfect_inference.call_count == 3
        cfg = perfect_inference.call_args_list[0].args[2]
        assert cfg.max_iters == policy.initial_inference_iters

    def test_cold_start(self, world, perfect_inference):
        """Test that every refresh starts from the configured mu_init."""
        _run(world, 8.0, PolicyConfig(max_episode_steps=25))

        assert all(c.kwargs["mu_init"] == 0.0 for c in perfect_inference.call_args_list)

    def test_warm_start(self, world, perfect_inference):
        """Test refreshes starting from the previous belief."""
        _run(world, 8.0, PolicyConfig(max_episode_steps=25, warm_start=True))

        starts = [c.kwargs["mu_init"] for c in perfect_inference.call_args_list]
        assert starts == [0.0, 8.0, 8.0]

    def test_deterministic(self, world, perfect_inference):
        """Test identical results for identical seeds."""
        slippy = World(world.peg, world.hole, slippage=SlippageConfig(), image_shape=(48, 64))

        assert _run(slippy, 8.0, seed=5) == _run(slippy, 8.0, seed=5)

    def test_log_frame(self, world, perfect_inference, tmp_path):
        """Test the per-tick CSV log."""
        result = _run(world, 8.0)

        frame = pd.read_csv(result.write_log(tmp_path / "episode.csv"))

        assert list(frame.columns) == EPISODE_LOG_COLUMNS
        assert len(frame) == result.steps
        assert frame["policy"].iloc[0] == "alignment"


class TestSeeds:
    """Tests for seed derivation."""

    def test_derive_seed_is_stable(self):
        """Test that derived seeds depend only on their inputs."""
        assert derive_seed(0, 1) == derive_seed(0, 1)
        assert derive_seed(0, 1) != derive_seed(0, 2)
        assert derive_seed(0, 1) != derive_seed(1, 0)
        assert 0 <= derive_seed(3, 4) < 2**32

    def test_streams_are_independent(self):
        """Test distinct streams of one episode seed."""
        assert stream_rng(9, 1).random() != stream_rng(9, 2).random()
        assert grasp_rng(9).random() == grasp_rng(9).random()


@pytest.mark.slow
class TestTrainedDecoderEpisode:
    """Episodes with a decoder trained on the noiseless cuboid."""

    def test_tilted_grasp_is_corrected(self, world, trained_decoder):
        """Test alignment and insertion of an 8 degree grasp."""
        result = _run(world, 8.0, decoder=trained_decoder)

        assert result.alignments_performed >= 1
        assert result.success

    def test_straight_grasp(self, world, trained_decoder):
        """Test that a straight grasp is not realigned."""
        result = _run(world, 0.0, decoder=trained_decoder)

        assert result.alignments_performed == 0
        assert result.success

"""
Test Configuration and Fixtures

Shared fixtures for all tests.
"""

import os

import numpy as np
import pytest

# Set test environment variables before importing package modules
# Only set defaults if not already set (CI provides these)
os.environ.setdefault("OUTPUT_BASE_PATH", "/tmp/test_output")
os.environ.setdefault("MASTER_SEED", "0")
os.environ.setdefault("LOG_LEVEL", "INFO")

from sim.rendering import get_peg, render_tactile
from tactile.imagekit.image import TactileImage
from tactile.schemas import AugmentConfig, DecoderConfig, TrainingConfig
from tactile.services.generator import DecoderModel, instant_train

IMAGE_SHAPE = (48, 64)
SMALL_SHAPE = (16, 16)


@pytest.fixture(scope="session")
def image_shape():
    """Default sensor image shape (height, width)."""
    return IMAGE_SHAPE


@pytest.fixture(scope="session")
def cuboid_o_init() -> TactileImage:
    """Noiseless straight-pose contact area of the cuboid peg."""
    return render_tactile(get_peg("cuboid", "none"), 0.0, 0, IMAGE_SHAPE)


@pytest.fixture(scope="session")
def trained_decoder_run(cuboid_o_init):
    """Decoder instant-trained on the cuboid footprint (500 samples, 5 epochs) and its report."""
    cfg = AugmentConfig(count=500, tilt_range_deg=(-20.0, 20.0), rng_seed=0)
    return instant_train(cuboid_o_init, cfg, epochs=5, seed=0)


@pytest.fixture(scope="session")
def trained_decoder(trained_decoder_run) -> DecoderModel:
    """Trained cuboid decoder."""
    return trained_decoder_run[0]


@pytest.fixture(scope="session")
def small_o_init() -> TactileImage:
    """Small noiseless rectangle image for fast decoder tests."""
    peg = get_peg("cuboid", "none").model_copy(update={"length_px": 10.0, "breadth_px": 4.0})
    return render_tactile(peg, 0.0, 0, SMALL_SHAPE)


@pytest.fixture(scope="session")
def small_decoder_config() -> DecoderConfig:
    """Narrow decoder for 16x16 images."""
    return DecoderConfig(hidden_units=8, channels=(4, 4, 2), dropout_rate=0.1)


@pytest.fixture(scope="session")
def small_decoder(small_o_init, small_decoder_config) -> DecoderModel:
    """Briefly trained small decoder; accurate enough for contract tests only."""
    cfg = AugmentConfig(count=40, tilt_range_deg=(-20.0, 20.0), rng_seed=1)
    model, _ = instant_train(
        small_o_init,
        cfg,
        epochs=2,
        seed=1,
        training=TrainingConfig(batch_size=8, min_sensitivity=None),
        decoder=small_decoder_config,
    )
    return model


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def output_dir(tmp_path):
    """Temporary run output root."""
    path = tmp_path / "runs"
    path.mkdir()
    return path

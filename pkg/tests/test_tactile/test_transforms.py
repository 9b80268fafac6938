"""
Tests for image rotation and self-data augmentation.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from sim.rendering import get_peg, render_tactile
from tactile.imagekit.image import TactileImage
from tactile.imagekit.transforms import augment, rotate, sample_tilts
from tactile.schemas import AugmentConfig


@pytest.fixture
def rectangle(cuboid_o_init):
    """Noiseless axis-aligned rectangle footprint."""
    return cuboid_o_init


class TestRotate:
    """Tests for rotate."""

    def test_zero_angle_is_identity(self, rectangle):
        """Test that a zero rotation returns the same pixels."""
        assert rotate(rectangle, 0.0) == rectangle
        assert rotate(rectangle, 360.0) == rectangle

    def test_round_trip(self, rectangle):
        """Test rotating forth and back."""
        restored = rotate(rotate(rectangle, 12.0), -12.0)

        assert restored.mean_abs_diff(rectangle) < 0.02

    def test_quarter_turn_matches_swapped_rectangle(self, rectangle):
        """Test a 90 degree rotation against the analytic renderer."""
        peg = get_peg("cuboid", "none")
        swapped = peg.model_copy(
            update={"length_px": peg.breadth_px, "breadth_px": peg.length_px}
        )
        expected = render_tactile(swapped, 0.0, 0, rectangle.shape)

        assert rotate(rectangle, 90.0).mean_abs_diff(expected) < 0.02

    def test_preserves_dimensions_and_range(self, rectangle):
        """Test output shape and intensity range."""
        rotated = rotate(rectangle, 33.0)

        assert rotated.shape == rectangle.shape
        assert rotated.pixels.min() >= 0.0
        assert rotated.pixels.max() <= 1.0

    @pytest.mark.parametrize("angle", [-20.0, -7.5, 5.0, 15.0])
    def test_preserves_mass(self, rectangle, angle):
        """Test that intensity mass is kept within 5 percent."""
        mass = rectangle.pixels.sum()

        assert rotate(rectangle, angle).pixels.sum() == pytest.approx(mass, rel=0.05)

    def test_outside_pixels_are_zero_filled(self):
        """Test that corners rotated in from outside the image are empty."""
        full = TactileImage(np.ones((20, 20)))
        rotated = rotate(full, 45.0)

        assert rotated.pixels[0, 0] == 0.0
        assert rotated.pixels[10, 10] == pytest.approx(1.0)

    def test_edges_blend_with_empty_surroundings(self):
        """Test that border pixels are not copied outward from the image edge."""
        rotated = rotate(TactileImage(np.ones((48, 64))), 10.0)
        rim = np.concatenate(
            [rotated.pixels[0], rotated.pixels[-1], rotated.pixels[:, 0], rotated.pixels[:, -1]]
        )

        # Edge clamping alone yields only exact zeros and ones here
        blended = (rim > 0.05) & (rim < 0.95)
        assert blended.sum() >= 10
        assert rotated.pixels[24, 32] == pytest.approx(1.0)

    def test_rejects_non_finite_angle(self, rectangle):
        """Test angle precondition."""
        with pytest.raises(ValueError, match="finite"):
            rotate(rectangle, float("nan"))


class TestAugment:
    """Tests for augment."""

    def test_sample_count_and_range(self, rectangle):
        """Test dataset size and tilt bounds."""
        cfg = AugmentConfig(count=500, tilt_range_deg=(-20.0, 20.0), rng_seed=7)
        samples = augment(rectangle, cfg)

        assert len(samples) == 500
        assert all(-20.0 <= s.tilt_deg <= 20.0 for s in samples)

    def test_sample_images_are_rotations(self, rectangle):
        """Test that each sample holds the rotated anchor."""
        cfg = AugmentConfig(count=3, tilt_range_deg=(-10.0, 10.0), rng_seed=3)

        for sample in augment(rectangle, cfg):
            assert sample.image == rotate(rectangle, sample.tilt_deg)

    def test_degenerate_range(self, rectangle):
        """Test a zero-width tilt range."""
        cfg = AugmentConfig(count=1, tilt_range_deg=(0.0, 0.0), rng_seed=5)
        (sample,) = augment(rectangle, cfg)

        assert sample.tilt_deg == 0.0
        assert sample.image == rectangle

    def test_same_seed_same_tilts(self):
        """Test determinism of the tilt sampler."""
        cfg = AugmentConfig(count=50, rng_seed=11)

        assert sample_tilts(cfg).tobytes() == sample_tilts(cfg).tobytes()

    def test_different_seeds_differ(self):
        """Test that the seed drives the tilts."""
        a = sample_tilts(AugmentConfig(count=10, rng_seed=1))
        b = sample_tilts(AugmentConfig(count=10, rng_seed=2))

        assert not np.array_equal(a, b)

    def test_config_rejects_reversed_range(self):
        """Test range ordering validation."""
        with pytest.raises(ValidationError):
            AugmentConfig(count=1, tilt_range_deg=(5.0, -5.0))

    def test_config_rejects_zero_count(self):
        """Test count validation."""
        with pytest.raises(ValidationError):
            AugmentConfig(count=0)

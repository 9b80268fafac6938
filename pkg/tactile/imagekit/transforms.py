"""
Image Transforms

Rotation of tactile images and self-data augmentation from a single
straight-pose contact area.
"""

import logging
from typing import List

import numpy as np
from PIL import Image as PILImage

from tactile.imagekit.image import LabeledSample, TactileImage
from tactile.schemas.imaging import AugmentConfig

logger = logging.getLogger(__name__)


def rotate(img: TactileImage, angle_deg: float) -> TactileImage:
    """
    Rotate an image about its center.

    Positive angles rotate counter-clockwise as displayed. Sampling is
    bilinear and source pixels outside the image contribute zero.

    Args:
        img: Image to rotate
        angle_deg: Rotation angle in degrees

    Returns:
        Rotated image with the same dimensions, clamped to [0, 1]
    """
    if not np.isfinite(angle_deg):
        raise ValueError(f"Rotation angle must be finite, got {angle_deg}")
    if angle_deg % 360.0 == 0.0:
        return img

    # Mode "F" keeps intensities as 32-bit floats through the affine resampler.
    # The one-pixel zero border stops bilinear sampling from copying edge values.
    padded = np.pad(img.pixels.astype(np.float32), 1)
    rotated = PILImage.fromarray(padded).rotate(
        angle_deg,
        resample=PILImage.Resampling.BILINEAR,
        expand=False,
        fillcolor=0.0,
    )
    return TactileImage.clipped(np.asarray(rotated, dtype=np.float64)[1:-1, 1:-1])


def sample_tilts(cfg: AugmentConfig) -> np.ndarray:
    """Draw the augmentation tilts uniformly from the configured range."""
    low, high = cfg.tilt_range_deg
    rng = np.random.default_rng(cfg.rng_seed)
    return rng.uniform(low, high, size=cfg.count)


def augment(o_init: TactileImage, cfg: AugmentConfig) -> List[LabeledSample]:
    """
    Create a labeled dataset by rotating one straight-pose image.

    Args:
        o_init: Contact area of the peg in a straight pose
        cfg: Sample count, tilt range and seed

    Returns:
        List of cfg.count samples; sample i holds rotate(o_init, tilt_i)
    """
    tilts = sample_tilts(cfg)
    samples = [LabeledSample(image=rotate(o_init, float(t)), tilt_deg=float(t)) for t in tilts]
    logger.debug(
        f"Augmented {len(samples)} samples in [{cfg.tilt_range_deg[0]}, "
        f"{cfg.tilt_range_deg[1]}] deg (seed {cfg.rng_seed})"
    )
    return samples

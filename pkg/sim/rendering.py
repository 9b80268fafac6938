"""
Contact-Area Rendering

Synthetic contact-area images standing in for a tactile sensor plus a
contact-area estimation network. Footprints are evaluated as signed
distance fields on the pixel grid; a seeded noise model punches holes
into the contact and adds spurious blobs around it without changing the
expected intensity mass.
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np
from PIL import Image as PILImage
from PIL import ImageFilter

from tactile.config import get_settings
from tactile.imagekit.image import TactileImage
from tactile.schemas.world import PegSpec

logger = logging.getLogger(__name__)

NOISE_BLOCK_PX = 4
NOISE_BAND_PX = 6

PEG_PRESETS: Dict[str, PegSpec] = {
    "shaft": PegSpec(
        name="shaft",
        footprint="rounded_rectangle",
        length_px=40,
        breadth_px=10,
        corner_radius_px=5,
        edge_softness_px=2.5,
        surface_noise=0.6,
    ),
    "pulley": PegSpec(
        name="pulley",
        footprint="annulus",
        length_px=22,
        breadth_px=22,
        inner_px=10,
        offset_px=(10.0, 0.0),
        edge_softness_px=1.5,
        surface_noise=0.2,
    ),
    "cylinder": PegSpec(
        name="cylinder",
        footprint="circle",
        length_px=18,
        breadth_px=18,
        offset_px=(10.0, 0.0),
        edge_softness_px=3.0,
        surface_noise=0.5,
    ),
    "cuboid": PegSpec(
        name="cuboid",
        footprint="rectangle",
        length_px=36,
        breadth_px=14,
        edge_softness_px=0.75,
        surface_noise=0.1,
    ),
    "elliptical_cylinder": PegSpec(
        name="elliptical_cylinder",
        footprint="ellipse",
        length_px=34,
        breadth_px=16,
        edge_softness_px=1.5,
        surface_noise=0.2,
    ),
}

# Named noise settings; "default" keeps each preset's own level
NOISE_LEVELS: Dict[str, Optional[float]] = {
    "none": 0.0,
    "low": 0.1,
    "high": 0.6,
    "default": None,
}


def get_peg(name: str, noise_level: str = "default") -> PegSpec:
    """
    Look up a peg preset.

    Args:
        name: Preset name
        noise_level: One of NOISE_LEVELS

    Returns:
        Peg specification with the requested surface noise
    """
    if name not in PEG_PRESETS:
        raise KeyError(f"Unknown peg '{name}', expected one of {sorted(PEG_PRESETS)}")
    if noise_level not in NOISE_LEVELS:
        raise KeyError(f"Unknown noise level '{noise_level}', expected one of {list(NOISE_LEVELS)}")
    peg = PEG_PRESETS[name]
    noise = NOISE_LEVELS[noise_level]
    return peg if noise is None else peg.model_copy(update={"surface_noise": noise})


def _box_distance(px: np.ndarray, py: np.ndarray, half_x: float, half_y: float) -> np.ndarray:
    qx = np.abs(px) - half_x
    qy = np.abs(py) - half_y
    outside = np.hypot(np.maximum(qx, 0.0), np.maximum(qy, 0.0))
    return outside + np.minimum(np.maximum(qx, qy), 0.0)


def _ellipse_distance(px: np.ndarray, py: np.ndarray, a: float, b: float) -> np.ndarray:
    k0 = np.hypot(px / a, py / b)
    k1 = np.hypot(px / (a * a), py / (b * b))
    safe = np.where(k1 > 0, k1, 1.0)
    return np.where(k1 > 0, k0 * (k0 - 1.0) / safe, -min(a, b))


def signed_distance(peg: PegSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Signed distance in pixels to the footprint edge (negative inside)."""
    px = u - peg.offset_px[0]
    py = v - peg.offset_px[1]
    half_x = peg.length_px / 2.0
    half_y = peg.breadth_px / 2.0

    if peg.footprint == "rectangle":
        return _box_distance(px, py, half_x, half_y)
    if peg.footprint == "rounded_rectangle":
        r = peg.corner_radius_px
        return _box_distance(px, py, half_x - r, half_y - r) - r
    if peg.footprint == "circle":
        return np.hypot(px, py) - half_x
    if peg.footprint == "ellipse":
        return _ellipse_distance(px, py, half_x, half_y)
    # annulus
    d = np.hypot(px, py)
    return np.maximum(d - half_x, peg.inner_px / 2.0 - d)


def render_footprint(peg: PegSpec, mu_true: float, image_shape: Tuple[int, int]) -> np.ndarray:
    """
    Noiseless contact coverage of a peg tilted by mu_true degrees.

    Rotation is counter-clockwise about the image center, sampled at pixel
    centers with the same convention as imagekit.rotate.
    """
    height, width = image_shape
    x = np.arange(width) + 0.5 - width / 2.0
    y = np.arange(height) + 0.5 - height / 2.0
    xx, yy = np.meshgrid(x, y)

    angle = np.radians(mu_true)
    c, s = np.cos(angle), np.sin(angle)
    u = c * xx - s * yy
    v = s * xx + c * yy

    coverage = 0.5 - signed_distance(peg, u, v) / peg.edge_softness_px
    return np.clip(coverage, 0.0, 1.0)


def _block_field(rng: np.random.Generator, p: float, image_shape: Tuple[int, int]) -> np.ndarray:
    """Bernoulli(p) blocks bilinearly upsampled to a smooth field with mean p."""
    height, width = image_shape
    blocks = (rng.random((-(-height // NOISE_BLOCK_PX), -(-width // NOISE_BLOCK_PX))) < p)
    field = PILImage.fromarray(blocks.astype(np.float32)).resize(
        (width, height), resample=PILImage.Resampling.BILINEAR
    )
    return np.clip(np.asarray(field, dtype=np.float64), 0.0, 1.0)


def _contact_band(clean: np.ndarray) -> np.ndarray:
    """Pixels within NOISE_BAND_PX of the contact support."""
    support = PILImage.fromarray(np.where(clean > 0.0, 255, 0).astype(np.uint8), mode="L")
    dilated = support.filter(ImageFilter.MaxFilter(2 * NOISE_BAND_PX + 1))
    return (np.asarray(dilated) > 0).astype(np.float64)


def apply_contact_noise(clean: np.ndarray, surface_noise: float, seed: int) -> np.ndarray:
    """
    Corrupt a contact coverage map the way an estimated contact area degrades.

    Holes appear inside the contact with probability 0.5 * surface_noise;
    blobs appear in the band around it with the probability that balances
    the removed mass in expectation.
    """
    if surface_noise <= 0.0:
        return clean
    rng = np.random.default_rng(seed)
    hole_p = 0.5 * surface_noise

    band = _contact_band(clean) * (1.0 - clean)
    band_mass = float(band.sum())
    blob_p = min(1.0, hole_p * float(clean.sum()) / band_mass) if band_mass > 0 else 0.0

    holes = _block_field(rng, hole_p, clean.shape)
    blobs = _block_field(rng, blob_p, clean.shape)
    return np.clip(clean * (1.0 - holes) + band * blobs, 0.0, 1.0)


def render_tactile(
    peg: PegSpec,
    mu_true: float,
    noise_seed: Optional[int] = 0,
    image_shape: Optional[Tuple[int, int]] = None,
) -> TactileImage:
    """
    Render the estimated contact area of a peg held with tilt mu_true.

    Args:
        peg: Peg footprint and noise level
        mu_true: Tilt of the peg relative to the end effector in degrees
        noise_seed: Seed of the noise pattern (None means 0)
        image_shape: (height, width), defaults to the configured sensor size

    Returns:
        Contact-area image in [0, 1]
    """
    shape = tuple(image_shape) if image_shape is not None else get_settings().image_shape
    clean = render_footprint(peg, mu_true, shape)
    noisy = apply_contact_noise(clean, peg.surface_noise, noise_seed or 0)
    return TactileImage(noisy)

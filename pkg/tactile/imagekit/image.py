"""
Tactile Image

Fixed-size grayscale contact-area image and labeled training sample.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TactileImage:
    """Grayscale contact-area image with intensities in [0, 1].

    Pixels are stored row-major as a read-only (height, width) float64 array.
    """

    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        pixels = np.array(self.pixels, dtype=np.float64, copy=True)
        if pixels.ndim != 2 or pixels.size == 0:
            raise ValueError(f"TactileImage needs a non-empty 2-D array, got shape {pixels.shape}")
        if not np.all(np.isfinite(pixels)):
            raise ValueError("TactileImage pixels must be finite")
        if pixels.min() < 0.0 or pixels.max() > 1.0:
            raise ValueError(
                f"TactileImage pixels must lie in [0, 1], got [{pixels.min()}, {pixels.max()}]"
            )
        pixels.setflags(write=False)
        object.__setattr__(self, "pixels", pixels)

    @classmethod
    def from_buffer(cls, width: int, height: int, values) -> "TactileImage":
        """Build an image from a flat row-major buffer."""
        flat = np.asarray(values, dtype=np.float64).ravel()
        if flat.size != width * height:
            raise ValueError(
                f"Buffer of {flat.size} values does not fill a {width}x{height} image"
            )
        return cls(flat.reshape(height, width))

    @classmethod
    def clipped(cls, values: np.ndarray) -> "TactileImage":
        """Build an image after clamping values to [0, 1]."""
        return cls(np.clip(values, 0.0, 1.0))

    @classmethod
    def blank(cls, width: int = 64, height: int = 48) -> "TactileImage":
        """All-zero image (no contact)."""
        return cls(np.zeros((height, width)))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        """Shape as (height, width)."""
        return self.pixels.shape

    def mean_abs_diff(self, other: "TactileImage") -> float:
        """Per-pixel mean absolute difference to another image of the same shape."""
        if other.shape != self.shape:
            raise ValueError(f"Cannot compare images of shapes {self.shape} and {other.shape}")
        return float(np.mean(np.abs(self.pixels - other.pixels)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TactileImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self) -> int:
        return hash((self.shape, self.pixels.tobytes()))


@dataclass(frozen=True)
class LabeledSample:
    """A contact-area image with its known tilt."""

    image: TactileImage
    tilt_deg: float

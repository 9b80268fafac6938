"""
Tactile image representation, rotation, augmentation and file I/O.
"""

from tactile.imagekit.dataset import read_dataset, write_dataset
from tactile.imagekit.image import LabeledSample, TactileImage
from tactile.imagekit.pgm import decode_pgm, encode_pgm, read_image, write_image
from tactile.imagekit.transforms import augment, rotate, sample_tilts

__all__ = [
    "TactileImage",
    "LabeledSample",
    "rotate",
    "augment",
    "sample_tilts",
    "read_image",
    "write_image",
    "encode_pgm",
    "decode_pgm",
    "read_dataset",
    "write_dataset",
]

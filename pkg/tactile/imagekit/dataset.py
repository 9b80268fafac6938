"""
Augmented Datasets

Persist labeled samples as PGM files plus a `filename,tilt_deg` manifest.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import pandas as pd

from tactile.imagekit.image import LabeledSample
from tactile.imagekit.pgm import read_image, write_image

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.csv"
MANIFEST_COLUMNS = ["filename", "tilt_deg"]


def sample_filename(index: int) -> str:
    """Filename of the index-th sample."""
    return f"sample_{index:05d}.pgm"


def write_dataset(samples: Sequence[LabeledSample], directory: Union[str, Path]) -> Path:
    """
    Write samples and their manifest into a directory.

    Args:
        samples: Labeled samples to store
        directory: Destination directory, created if missing

    Returns:
        Path to the manifest file
    """
    dir_path = Path(directory)
    dir_path.mkdir(parents=True, exist_ok=True)

    rows = []
    for index, sample in enumerate(samples):
        filename = sample_filename(index)
        write_image(sample.image, dir_path / filename)
        rows.append({"filename": filename, "tilt_deg": sample.tilt_deg})

    manifest_path = dir_path / MANIFEST_NAME
    pd.DataFrame(rows, columns=MANIFEST_COLUMNS).to_csv(
        manifest_path, index=False, float_format="%.17g"
    )
    logger.info(f"Wrote {len(rows)} samples to {dir_path}")
    return manifest_path


def read_dataset(
    directory: Union[str, Path],
    expected_shape: Optional[Tuple[int, int]] = None,
) -> List[LabeledSample]:
    """
    Read a dataset written by write_dataset.

    Args:
        directory: Directory holding the manifest and images
        expected_shape: Optional required (height, width) of every image

    Returns:
        Samples in manifest order
    """
    dir_path = Path(directory)
    manifest = pd.read_csv(dir_path / MANIFEST_NAME, dtype={"filename": str, "tilt_deg": float})
    missing = set(MANIFEST_COLUMNS) - set(manifest.columns)
    if missing:
        raise ValueError(f"Manifest is missing columns: {sorted(missing)}")

    return [
        LabeledSample(
            image=read_image(dir_path / row.filename, expected_shape),
            tilt_deg=float(row.tilt_deg),
        )
        for row in manifest.itertuples(index=False)
    ]

"""
PGM Image Files

Bit-exact 8-bit binary grayscale (P5) reading and writing of tactile images.
"""

import logging
from io import BytesIO
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from PIL import Image as PILImage

from tactile.exceptions import ImageDimensionError, ImageParseError
from tactile.imagekit.image import TactileImage

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _quantize(img: TactileImage) -> np.ndarray:
    """Map [0, 1] intensities to 8-bit levels."""
    return np.rint(img.pixels * 255.0).astype(np.uint8)


def encode_pgm(img: TactileImage) -> bytes:
    """
    Encode an image as binary PGM bytes.

    Args:
        img: Image to encode

    Returns:
        P5 file contents with maxval 255
    """
    buffer = BytesIO()
    PILImage.fromarray(_quantize(img), mode="L").save(buffer, format="PPM")
    return buffer.getvalue()


def _read_token(data: bytes, pos: int) -> Tuple[bytes, int]:
    """Read one header token, skipping whitespace and comments."""
    n = len(data)
    while pos < n:
        ch = data[pos : pos + 1]
        if ch == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch in _WHITESPACE:
            pos += 1
        else:
            break
    if pos >= n:
        raise ImageParseError("Unexpected end of header", pos)
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def _read_int(data: bytes, pos: int, name: str) -> Tuple[int, int]:
    token, end = _read_token(data, pos)
    if not token.isdigit():
        raise ImageParseError(f"Invalid {name} {token!r}", end - len(token))
    return int(token), end


def decode_pgm(data: bytes, expected_shape: Optional[Tuple[int, int]] = None) -> TactileImage:
    """
    Decode binary PGM bytes.

    Args:
        data: File contents
        expected_shape: Optional required (height, width)

    Returns:
        Decoded image with intensities scaled to [0, 1]

    Raises:
        ImageParseError: Malformed or truncated file, with the byte offset
        ImageDimensionError: Dimensions differ from expected_shape
    """
    if data[:2] != b"P5":
        raise ImageParseError("Missing P5 magic number", 0)
    pos = 2
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    maxval, pos = _read_int(data, pos, "maxval")
    if width == 0 or height == 0:
        raise ImageParseError("Zero image dimension", pos)
    if maxval != 255:
        raise ImageParseError(f"Unsupported maxval {maxval}, expected 255", pos)
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise ImageParseError("Missing separator after header", pos)
    pos += 1

    payload_end = pos + width * height
    if len(data) < payload_end:
        raise ImageParseError(
            f"Truncated pixel data: need {width * height} bytes, found {len(data) - pos}",
            len(data),
        )

    if expected_shape is not None and (height, width) != tuple(expected_shape):
        raise ImageDimensionError(tuple(expected_shape), (height, width))

    with PILImage.open(BytesIO(data[:payload_end])) as pil_img:
        levels = np.asarray(pil_img.convert("L"), dtype=np.float64)
    return TactileImage(levels / 255.0)


def write_image(img: TactileImage, path: PathLike) -> Path:
    """
    Write an image as a PGM file.

    Writes atomically using a temp file.

    Args:
        img: Image to write
        path: Destination path

    Returns:
        Path of the written file
    """
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    temp_path = file_path.with_suffix(".tmp")
    try:
        temp_path.write_bytes(encode_pgm(img))
        temp_path.replace(file_path)
    except Exception:
        if temp_path.exists():
            temp_path.unlink()
        raise

    return file_path


def read_image(
    path: PathLike,
    expected_shape: Optional[Tuple[int, int]] = None,
) -> TactileImage:
    """
    Read a PGM file.

    Args:
        path: Source path
        expected_shape: Optional required (height, width)

    Returns:
        Decoded image
    """
    return decode_pgm(Path(path).read_bytes(), expected_shape)

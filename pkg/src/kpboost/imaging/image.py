# -*- coding: utf-8 -*-
"""
Grayscale raster ingestion
Binary PGM (P5) and 8-bit PNG (gray, RGB, RGBA) decoding to luminance
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import cv2
import numpy as np

from ..exceptions import ImageFormatError

logger = logging.getLogger(__name__)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
PGM_WHITESPACE = b" \t\r\n\v\f"

# ITU-R BT.601 luma weights, per mille
LUMA_R = 299
LUMA_G = 587
LUMA_B = 114


@dataclass(frozen=True)
class GrayImage:
    """Immutable 8-bit grayscale raster, indexed pixels[y, x]"""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2:
            raise ImageFormatError(f"expected a 2-D raster, got shape {pixels.shape}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ImageFormatError("zero-dimension image")
        if pixels.dtype != np.uint8:
            if not np.issubdtype(pixels.dtype, np.integer):
                raise ImageFormatError(f"pixel values must be integers, got {pixels.dtype}")
            if pixels.min() < 0 or pixels.max() > 255:
                raise ImageFormatError("pixel values must lie in [0, 255]")
        pixels = np.array(pixels, dtype=np.uint8, copy=True)
        pixels.setflags(write=False)
        object.__setattr__(self, "pixels", pixels)

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @classmethod
    def blank(cls, width: int, height: int, value: int = 0) -> "GrayImage":
        return cls(np.full((height, width), value, dtype=np.uint8))


def rgb_to_luma(rgb: np.ndarray) -> np.ndarray:
    """Integer-rounded BT.601 luminance of an (h, w, 3) RGB array"""
    channels = rgb.astype(np.int32)
    weighted = LUMA_R * channels[..., 0] + LUMA_G * channels[..., 1] + LUMA_B * channels[..., 2]
    return ((weighted + 500) // 1000).astype(np.uint8)


def _next_token(data: bytes, pos: int) -> Tuple[bytes, int]:
    """Read one whitespace-delimited header token, skipping '#' comments"""
    size = len(data)
    while pos < size:
        if data[pos:pos + 1] == b"#":
            while pos < size and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif data[pos] in PGM_WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < size and data[pos] not in PGM_WHITESPACE and data[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise ImageFormatError("unexpected end of file")
    return data[start:pos], pos


def decode_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) PGM with maxval <= 255"""
    magic, pos = _next_token(data, 0)
    if magic == b"P2":
        raise ImageFormatError("ASCII PGM (P2) is not supported")
    if magic != b"P5":
        raise ImageFormatError(f"unsupported format: {magic[:8]!r}")

    fields = []
    for _ in range(3):
        token, pos = _next_token(data, pos)
        if not token.isdigit():
            raise ImageFormatError(f"malformed PGM header field {token[:16]!r}")
        fields.append(int(token))
    width, height, maxval = fields

    if width < 1 or height < 1:
        raise ImageFormatError("zero-dimension image")
    if maxval < 1 or maxval > 255:
        raise ImageFormatError(f"unsupported PGM maxval {maxval} (must be 1..255)")

    # exactly one whitespace byte separates the header from the payload
    if pos >= len(data):
        raise ImageFormatError("unexpected end of file")
    if data[pos] not in PGM_WHITESPACE:
        raise ImageFormatError("missing whitespace after PGM header")
    pos += 1

    count = width * height
    payload = data[pos:pos + count]
    if len(payload) < count:
        raise ImageFormatError("unexpected end of file")

    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    if maxval != 255:
        if int(pixels.max()) > maxval:
            raise ImageFormatError(f"pixel value exceeds maxval {maxval}")
        pixels = ((pixels.astype(np.int32) * 255 + maxval // 2) // maxval).astype(np.uint8)
    return GrayImage(pixels)


def decode_png(data: bytes) -> GrayImage:
    """Decode an 8-bit grayscale, RGB or RGBA PNG"""
    decoded = cv2.imdecode(np.frombuffer(data, dtype=np.uint8), cv2.IMREAD_UNCHANGED)
    if decoded is None:
        raise ImageFormatError("corrupt or truncated PNG")
    if decoded.dtype != np.uint8:
        raise ImageFormatError(f"unsupported PNG bit depth ({decoded.dtype})")
    if decoded.ndim == 2:
        return GrayImage(decoded)
    if decoded.ndim == 3 and decoded.shape[2] in (3, 4):
        # OpenCV returns BGR(A)
        rgb = decoded[..., 2::-1] if decoded.shape[2] == 3 else decoded[..., [2, 1, 0]]
        return GrayImage(rgb_to_luma(rgb))
    raise ImageFormatError(f"unsupported PNG channel layout {decoded.shape}")


def load_image(path: Union[str, Path]) -> GrayImage:
    """Load a PGM (P5) or PNG file as an 8-bit grayscale image

    Args:
        path: image file

    Returns:
        GrayImage: luminance raster
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ImageFormatError(f"cannot read {path}: {e.strerror or e}") from e

    if data.startswith(PNG_MAGIC):
        image = decode_png(data)
    elif data[:1] == b"P":
        image = decode_pgm(data)
    elif not data:
        raise ImageFormatError("unexpected end of file")
    else:
        raise ImageFormatError(f"unsupported format: {path.name}")
    logger.debug("Loaded %s (%dx%d)", path, image.width, image.height)
    return image

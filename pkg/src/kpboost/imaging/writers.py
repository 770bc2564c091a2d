# -*- coding: utf-8 -*-
"""
Raster output: PGM/PNG writing and keypoint overlays
"""

import logging
from pathlib import Path
from typing import Iterable, Tuple, Union

import cv2
import numpy as np

from ..exceptions import ImageFormatError

logger = logging.getLogger(__name__)

Circle = Tuple[int, int, int]


def save_image(path: Union[str, Path], pixels: np.ndarray) -> Path:
    """Write a gray (h, w) or BGR (h, w, 3) uint8 array; format follows the suffix"""
    path = Path(path)
    if path.suffix.lower() not in (".pgm", ".png"):
        raise ImageFormatError(f"unsupported output format: {path.suffix}")
    if path.suffix.lower() == ".pgm" and pixels.ndim != 2:
        pixels = cv2.cvtColor(pixels, cv2.COLOR_BGR2GRAY)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not cv2.imwrite(str(path), np.ascontiguousarray(pixels, dtype=np.uint8)):
        raise ImageFormatError(f"failed to write {path}")
    logger.debug("Wrote %s", path)
    return path


def draw_circles(gray: np.ndarray, circles: Iterable[Circle], color: Tuple[int, int, int]) -> np.ndarray:
    """Draw 1-pixel circles (x, y, radius) on a gray or BGR canvas; returns BGR"""
    canvas = cv2.cvtColor(gray, cv2.COLOR_GRAY2BGR) if gray.ndim == 2 else gray.copy()
    for x, y, radius in circles:
        cv2.circle(canvas, (int(x), int(y)), max(1, int(radius)), color, 1, lineType=cv2.LINE_8)
    return canvas


def side_by_side(left: np.ndarray, right: np.ndarray, gap: int = 4) -> np.ndarray:
    """Concatenate two equally sized BGR canvases with a black gap"""
    spacer = np.zeros((left.shape[0], gap, 3), dtype=np.uint8)
    return np.hstack([left, spacer, right])

# -*- coding: utf-8 -*-
"""
Integral image and O(1) rectangular box sums
"""

from dataclasses import dataclass

import numpy as np

from .image import GrayImage


@dataclass(frozen=True)
class IntegralImage:
    """Cumulative-sum table S with S[y, x] = sum of pixels in [0, x) x [0, y)

    Stored as int64, shape (height + 1, width + 1).
    """

    table: np.ndarray

    @property
    def width(self) -> int:
        return int(self.table.shape[1]) - 1

    @property
    def height(self) -> int:
        return int(self.table.shape[0]) - 1

    @property
    def total(self) -> int:
        return int(self.table[-1, -1])


def integral(img: GrayImage) -> IntegralImage:
    table = np.zeros((img.height + 1, img.width + 1), dtype=np.int64)
    table[1:, 1:] = img.pixels.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    table.setflags(write=False)
    return IntegralImage(table)


def box_sums(ii: IntegralImage, x0, y0, w, h) -> np.ndarray:
    """Vectorized clipped box sums; arguments broadcast against each other

    The rectangle [x0, x0 + w) x [y0, y0 + h) is clipped to the image, so area
    outside contributes zero and non-positive sizes give zero.
    """
    x0 = np.asarray(x0, dtype=np.int64)
    y0 = np.asarray(y0, dtype=np.int64)
    xa = np.clip(x0, 0, ii.width)
    ya = np.clip(y0, 0, ii.height)
    xb = np.maximum(np.clip(x0 + w, 0, ii.width), xa)
    yb = np.maximum(np.clip(y0 + h, 0, ii.height), ya)
    s = ii.table
    return s[yb, xb] - s[ya, xb] - s[yb, xa] + s[ya, xa]


def box_sum(ii: IntegralImage, x0: int, y0: int, w: int, h: int) -> int:
    """Exact pixel sum over the clipped rectangle at (x0, y0) of size w x h"""
    if w <= 0 or h <= 0:
        return 0
    return int(box_sums(ii, x0, y0, w, h))

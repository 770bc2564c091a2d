# -*- coding: utf-8 -*-
"""
64-D integer keypoint descriptor

A 20x20 grid of Haar gradient samples spans a 20s patch around the
keypoint. Each sample's (dx, |dx|, dy, |dy|) is distributed bilinearly over
the 4x4 sub-region centers, and the 64 sums are L1-normalized to a fixed
integer mass.
"""

from typing import Iterable, Sequence

import numpy as np

from ..imaging.integral import IntegralImage, box_sums
from .detector import FIXED_SHIFT, Keypoint

DESCRIPTOR_LENGTH = 64
NORM_MASS = 4096

GRID = 20
SUBREGIONS = 4
SAMPLES_PER_REGION = GRID // SUBREGIONS
# per-axis bilinear weights are in 1/16, their products in 1/256
AXIS_ONE = 16
WEIGHT_ONE = AXIS_ONE * AXIS_ONE

Descriptor = np.ndarray


def axis_weights(u16: int) -> np.ndarray:
    """Weights of a position (sub-region units, 1/16 fixed point) on the 4 centers

    Positions beyond the outer centers give their full weight to the nearest one.
    """
    weights = np.zeros(SUBREGIONS, dtype=np.int64)
    k0 = u16 >> 4
    frac = u16 & (AXIS_ONE - 1)
    if k0 < 0:
        weights[0] = AXIS_ONE
    elif k0 >= SUBREGIONS - 1:
        weights[SUBREGIONS - 1] = AXIS_ONE
    else:
        weights[k0] = AXIS_ONE - frac
        weights[k0 + 1] = frac
    return weights


def bilinear_weights(u16: int, v16: int) -> np.ndarray:
    """4x4 weights (1/256, summing to 256) for a point at (u, v) in sub-region units"""
    return np.outer(axis_weights(v16), axis_weights(u16))


def _sample_weight_table() -> np.ndarray:
    # sample i sits (i - 2) / 5 sub-regions from the first center
    table = np.stack([axis_weights(((i - 2) * AXIS_ONE) // SAMPLES_PER_REGION) for i in range(GRID)])
    table.setflags(write=False)
    return table


SAMPLE_WEIGHTS = _sample_weight_table()


def sample_gradients(ii: IntegralImage, kp: Keypoint) -> np.ndarray:
    """Haar responses on the 20x20 sample grid, shape (20, 20, 2) as [row, col, (dx, dy)]

    dx is right half minus left half and dy bottom half minus top half of a
    2s x 2s window; windows are clipped to the image.
    """
    offsets = ((2 * np.arange(GRID, dtype=np.int64) - (GRID - 1)) * kp.scale) >> 1
    rounding = 1 << (FIXED_SHIFT - 1)
    xs = ((kp.x + offsets + rounding) >> FIXED_SHIFT)[None, :]
    ys = ((kp.y + offsets + rounding) >> FIXED_SHIFT)[:, None]
    half = max(1, (kp.scale + rounding) >> FIXED_SHIFT)
    side = 2 * half

    dx = box_sums(ii, xs, ys - half, half, side) - box_sums(ii, xs - half, ys - half, half, side)
    dy = box_sums(ii, xs - half, ys, side, half) - box_sums(ii, xs - half, ys - half, side, half)
    return np.stack([dx, dy], axis=-1)


def normalize_l1(raw: np.ndarray) -> Descriptor:
    """Scale to total absolute mass NORM_MASS with truncation, then hand the
    missing units to the largest remainders (higher index first on ties)"""
    raw = np.asarray(raw, dtype=np.int64).reshape(-1)
    magnitude = np.abs(raw)
    total = int(magnitude.sum())
    if total == 0:
        return np.zeros(raw.size, dtype=np.int32)

    scaled = magnitude * NORM_MASS
    quotient = scaled // total
    remainder = scaled % total
    short = NORM_MASS - int(quotient.sum())
    if short > 0:
        order = np.lexsort((-np.arange(raw.size), -remainder))
        quotient[order[:short]] += 1
    return (np.sign(raw) * quotient).astype(np.int32)


def accumulate_subregions(gradients: np.ndarray) -> np.ndarray:
    """Bilinear accumulation of (dx, |dx|, dy, |dy|) into a (4, 4, 4) array, 1/256 units"""
    dx = gradients[..., 0]
    dy = gradients[..., 1]
    values = np.stack([dx, np.abs(dx), dy, np.abs(dy)], axis=-1)
    return np.einsum("jy,ix,jic->yxc", SAMPLE_WEIGHTS, SAMPLE_WEIGHTS, values)


def compute_descriptor(ii: IntegralImage, kp: Keypoint) -> Descriptor:
    """Sub-region-major, component-minor 64-vector of signed integers"""
    return normalize_l1(accumulate_subregions(sample_gradients(ii, kp)).reshape(DESCRIPTOR_LENGTH))


def describe_keypoints(ii: IntegralImage, keypoints: Sequence[Keypoint]) -> np.ndarray:
    """Descriptors of several keypoints as a (k, 64) int32 array"""
    if not keypoints:
        return np.zeros((0, DESCRIPTOR_LENGTH), dtype=np.int32)
    return np.stack([compute_descriptor(ii, kp) for kp in keypoints])


def format_descriptor(descriptor: Descriptor) -> str:
    return " ".join(str(int(v)) for v in descriptor)


def parse_descriptor(tokens: Iterable[str]) -> Descriptor:
    values = np.array([int(t) for t in tokens], dtype=np.int32)
    if values.size != DESCRIPTOR_LENGTH:
        raise ValueError(f"expected {DESCRIPTOR_LENGTH} descriptor values, got {values.size}")
    return values

# -*- coding: utf-8 -*-
"""
Per-image feature extraction: keypoints and their descriptors
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

import numpy as np

from ..config.run_config import DetectorConfig
from ..imaging.image import GrayImage, load_image
from ..imaging.integral import integral
from .descriptor import describe_keypoints, format_descriptor
from .detector import FIXED_ONE, FIXED_SHIFT, Keypoint, detect_in_integral

logger = logging.getLogger(__name__)

KEYPOINT_COLUMNS = ["x", "y", "scale", "response"]


@dataclass(frozen=True)
class ImageFeatures:
    """Keypoints of one image with their (k, 64) descriptors"""

    width: int
    height: int
    keypoints: List[Keypoint]
    descriptors: np.ndarray

    def __len__(self) -> int:
        return len(self.keypoints)


def extract_features(img: GrayImage, cfg: DetectorConfig) -> ImageFeatures:
    ii = integral(img)
    keypoints = detect_in_integral(ii, cfg)
    return ImageFeatures(
        width=img.width,
        height=img.height,
        keypoints=keypoints,
        descriptors=describe_keypoints(ii, keypoints),
    )


def extract_file(path: Union[str, Path], cfg: DetectorConfig) -> ImageFeatures:
    features = extract_features(load_image(path), cfg)
    logger.debug("%s: %d keypoints", path, len(features))
    return features


def format_fixed(value: int) -> str:
    """Exact decimal rendering of a non-negative 1/16 fixed-point value"""
    return f"{value >> FIXED_SHIFT}.{(value & (FIXED_ONE - 1)) * 625:04d}"


def keypoint_pixel(kp: Keypoint):
    """Nearest pixel (x, y) and radius of a keypoint"""
    half = FIXED_ONE >> 1
    return (kp.x + half) >> FIXED_SHIFT, (kp.y + half) >> FIXED_SHIFT, (kp.scale + half) >> FIXED_SHIFT


def keypoint_rows(features: ImageFeatures) -> List[dict]:
    """Listing rows: fixed-point position and scale, response and descriptor"""
    rows = []
    for kp, descriptor in zip(features.keypoints, features.descriptors):
        rows.append({
            "x": format_fixed(kp.x),
            "y": format_fixed(kp.y),
            "scale": format_fixed(kp.scale),
            "response": kp.response,
            "descriptor": format_descriptor(descriptor),
        })
    return rows

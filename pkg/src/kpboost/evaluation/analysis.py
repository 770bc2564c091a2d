# -*- coding: utf-8 -*-
"""
Responding keypoints, per-feature position heatmaps and overlays
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..boosting.adaboost import StrongClassifier
from ..config.settings import AppSettings
from ..exceptions import ConfigurationError, DatasetError
from ..features.detector import Keypoint
from ..features.extraction import ImageFeatures, format_fixed, keypoint_pixel
from ..imaging.writers import draw_circles, save_image, side_by_side
from ..utils.io_utils import write_csv

logger = logging.getLogger(__name__)

RESPONDING_COLUMNS = ["x", "y", "scale", "response", "features"]
HIT_COLUMNS = ["image", "x", "y", "scale"]


@dataclass(frozen=True)
class RespondingKeypoint:
    keypoint: Keypoint
    features: Tuple[int, ...]

    def as_row(self) -> dict:
        return {
            "x": format_fixed(self.keypoint.x),
            "y": format_fixed(self.keypoint.y),
            "scale": format_fixed(self.keypoint.scale),
            "response": self.keypoint.response,
            "features": " ".join(str(f) for f in self.features),
        }


def response_matrix(sc: StrongClassifier, features: ImageFeatures) -> np.ndarray:
    """(keypoints, rounds) booleans: keypoint k lies within the threshold of feature t"""
    if len(features) == 0 or len(sc) == 0:
        return np.zeros((len(features), len(sc)), dtype=bool)
    descriptors = features.descriptors.astype(np.int64)
    sad = np.abs(descriptors[:, None, :] - sc.references()[None, :, :]).sum(axis=2)
    return sad < sc.thresholds()[None, :]


def responding_keypoints(sc: StrongClassifier, features: ImageFeatures) -> List[RespondingKeypoint]:
    """Detected keypoints matching at least one model feature, with the features they match"""
    matches = response_matrix(sc, features)
    result = []
    for kp, row in zip(features.keypoints, matches):
        hit = np.flatnonzero(row)
        if hit.size:
            result.append(RespondingKeypoint(keypoint=kp, features=tuple(int(f) for f in hit)))
    return result


# ==================== Heatmaps ====================

@dataclass
class HeatmapHit:
    image: str
    x: int
    y: int
    scale: int


@dataclass
class Heatmap:
    """Accumulated pixel positions of one feature's responding keypoints"""

    feature: int
    width: int
    height: int
    grid: np.ndarray
    hits: List[HeatmapHit] = field(default_factory=list)

    @classmethod
    def empty(cls, feature: int, width: int, height: int) -> "Heatmap":
        return cls(feature=feature, width=width, height=height, grid=np.zeros((height, width), dtype=np.int64))

    def add(self, image: str, kp: Keypoint) -> None:
        x, y, _ = keypoint_pixel(kp)
        x = min(max(x, 0), self.width - 1)
        y = min(max(y, 0), self.height - 1)
        self.grid[y, x] += 1
        self.hits.append(HeatmapHit(image=image, x=x, y=y, scale=kp.scale))

    def render(self) -> np.ndarray:
        """uint8 image scaled so the busiest pixel is white"""
        peak = int(self.grid.max()) if self.grid.size else 0
        if peak == 0:
            return np.zeros((self.height, self.width), dtype=np.uint8)
        return (self.grid * 255 // peak).astype(np.uint8)

    def hit_rows(self) -> List[dict]:
        return [{"image": h.image, "x": h.x, "y": h.y, "scale": format_fixed(h.scale)} for h in self.hits]


def keypoint_heatmap(
    sc: StrongClassifier,
    feature: int,
    images: Sequence[ImageFeatures],
    names: Sequence[str],
) -> Heatmap:
    """Heatmap of feature's responding keypoints over images of one common geometry"""
    if not 0 <= feature < len(sc):
        raise ConfigurationError(f"Feature index {feature} outside the model's {len(sc)} rounds")
    if not images:
        raise DatasetError("No images for the heatmap")
    shapes = {(f.width, f.height) for f in images}
    if len(shapes) != 1:
        raise DatasetError(f"Heatmap images must share one geometry, found {sorted(shapes)}")
    width, height = shapes.pop()

    heatmap = Heatmap.empty(feature, width, height)
    for name, features in zip(names, images):
        matches = response_matrix(sc, features)
        for kp, row in zip(features.keypoints, matches):
            if row[feature]:
                heatmap.add(name, kp)
    logger.info("Feature %d: %d hits over %d images", feature, len(heatmap.hits), len(images))
    return heatmap


def heatmap_concentration(heatmap: Heatmap, window_fraction: Fraction = Fraction(1, 2)) -> Fraction:
    """Largest share of hits inside one axis-aligned window

    The window spans window_fraction of the width and of the height, so the
    default covers a quarter of the image area.
    """
    total = int(heatmap.grid.sum())
    if total == 0:
        return Fraction(0)
    ww = max(1, heatmap.width * window_fraction.numerator // window_fraction.denominator)
    wh = max(1, heatmap.height * window_fraction.numerator // window_fraction.denominator)
    table = np.zeros((heatmap.height + 1, heatmap.width + 1), dtype=np.int64)
    table[1:, 1:] = heatmap.grid.cumsum(axis=0).cumsum(axis=1)
    sums = table[wh:, ww:] - table[:-wh, ww:] - table[wh:, :-ww] + table[:-wh, :-ww]
    return Fraction(int(sums.max()), total)


def save_heatmap(heatmap: Heatmap, out_dir: Union[str, Path]) -> Tuple[Path, Path]:
    out_dir = Path(out_dir)
    csv_path = write_csv(heatmap.hit_rows(), HIT_COLUMNS, out_dir / f"heatmap_{heatmap.feature}.csv")
    image_path = save_image(out_dir / f"heatmap_{heatmap.feature}.pgm", heatmap.render())
    return csv_path, image_path


# ==================== Overlays ====================

def _circles(keypoints: Sequence[Keypoint]):
    return [keypoint_pixel(kp) for kp in keypoints]


def render_responding(gray: np.ndarray, features: ImageFeatures, responding: Sequence[RespondingKeypoint]) -> np.ndarray:
    """All keypoints in gray, responding ones highlighted"""
    canvas = draw_circles(gray, _circles(features.keypoints), AppSettings.KEYPOINT_COLOR)
    return draw_circles(canvas, _circles([r.keypoint for r in responding]), AppSettings.RESPONDING_COLOR)


def render_filtered_pair(gray: np.ndarray, features: ImageFeatures, responding: Sequence[RespondingKeypoint]) -> np.ndarray:
    """All keypoints on the left, only responding keypoints on the right"""
    left = draw_circles(gray, _circles(features.keypoints), AppSettings.KEYPOINT_COLOR)
    right = draw_circles(gray, _circles([r.keypoint for r in responding]), AppSettings.RESPONDING_COLOR)
    return side_by_side(left, right)


def write_responding(responding: Sequence[RespondingKeypoint], path: Union[str, Path]) -> Path:
    return write_csv([r.as_row() for r in responding], RESPONDING_COLUMNS, path)

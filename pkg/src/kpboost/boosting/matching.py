# -*- coding: utf-8 -*-
"""
Descriptor distances and the keypoint-to-image distance matrix
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..exceptions import ConfigurationError
from ..features.descriptor import DESCRIPTOR_LENGTH, NORM_MASS
from ..features.detector import Keypoint
from ..utils.parallel import chunk_ranges, ordered_map

logger = logging.getLogger(__name__)

# one more than the largest SAD between two normalized descriptors
MAX_DIST = 2 * NORM_MASS + 1

ROW_BLOCK = 256


@dataclass(frozen=True)
class KeypointRecord:
    """Keypoint of the positive pool with its provenance"""

    id: int
    image_index: int
    keypoint: Keypoint
    descriptor: np.ndarray


@dataclass(frozen=True)
class DistanceMatrix:
    """entries[i, j] = image_distance(pool[i], image j); labels[j] in {0, 1}"""

    entries: np.ndarray
    labels: np.ndarray

    @property
    def q_rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.entries.shape[1])


def sad_distance(a: np.ndarray, b: np.ndarray) -> int:
    return int(np.abs(np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)).sum())


def _as_descriptor_array(descriptors) -> np.ndarray:
    array = np.asarray(descriptors, dtype=np.int64)
    if array.size == 0:
        return np.zeros((0, DESCRIPTOR_LENGTH), dtype=np.int64)
    return array.reshape(-1, DESCRIPTOR_LENGTH)


def image_distance(k: np.ndarray, image_descriptors) -> int:
    """Smallest SAD between k and the descriptors of an image, MAX_DIST if it has none"""
    others = _as_descriptor_array(image_descriptors)
    if others.shape[0] == 0:
        return MAX_DIST
    return int(np.abs(others - np.asarray(k, dtype=np.int64)[None, :]).sum(axis=1).min())


def distances_to_image(references: np.ndarray, image_descriptors) -> np.ndarray:
    """image_distance of several reference descriptors at once, shape (r,)"""
    references = _as_descriptor_array(references)
    others = _as_descriptor_array(image_descriptors)
    if others.shape[0] == 0:
        return np.full(references.shape[0], MAX_DIST, dtype=np.int64)
    sad = np.abs(references[:, None, :] - others[None, :, :]).sum(axis=2)
    return sad.min(axis=1)


def build_distance_matrix(
    pool: Sequence[KeypointRecord],
    image_descriptors: Sequence[np.ndarray],
    labels: Sequence[int],
    check_sources: bool = True,
    workers: Optional[int] = None,
) -> DistanceMatrix:
    """Q x N matrix of keypoint-to-image distances

    Args:
        pool: positive keypoint pool, one row each
        image_descriptors: per-column (k_j, 64) descriptor arrays
        labels: per-column class labels
        check_sources: require every pool keypoint's source image to be a column
        workers: thread count for row blocks (capped by KPBOOST_THREADS)
    """
    n_cols = len(image_descriptors)
    if len(labels) != n_cols:
        raise ConfigurationError(f"{len(labels)} labels for {n_cols} images")
    if check_sources:
        for record in pool:
            if not 0 <= record.image_index < n_cols:
                raise ConfigurationError(
                    f"Pool keypoint {record.id} references image {record.image_index}, "
                    f"which is not among the {n_cols} dataset images"
                )

    references = _as_descriptor_array([record.descriptor for record in pool])
    columns = [_as_descriptor_array(d) for d in image_descriptors]

    def fill_block(rows: range) -> np.ndarray:
        block = references[rows.start:rows.stop]
        out = np.empty((block.shape[0], n_cols), dtype=np.int32)
        for j, column in enumerate(columns):
            out[:, j] = distances_to_image(block, column)
        return out

    blocks = ordered_map(fill_block, chunk_ranges(len(pool), ROW_BLOCK), workers)
    entries = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, n_cols), dtype=np.int32)
    logger.info("Distance matrix %d x %d built", entries.shape[0], n_cols)
    return DistanceMatrix(entries=entries, labels=np.asarray(labels, dtype=np.uint8))


def rows_without_zero(matrix: DistanceMatrix) -> List[int]:
    """Rows lacking the zero at their source image; empty on any valid training matrix"""
    if matrix.q_rows == 0:
        return []
    return [int(i) for i in np.flatnonzero((matrix.entries == 0).sum(axis=1) == 0)]


def threshold_candidates(row: Sequence[int]) -> List[int]:
    """Thresholds inducing every split of a row under `distance < t`

    One candidate between each pair of distinct successive sorted distances,
    plus a sentinel accepting every image that has keypoints.
    """
    values = np.unique(np.asarray(row, dtype=np.int64))
    if values.size == 0:
        return []
    lows, highs = values[:-1], values[1:]
    mids = np.maximum((lows + highs) >> 1, lows + 1)
    sentinel = min(int(values[-1]) + 1, MAX_DIST)
    candidates = [int(m) for m in mids]
    if not candidates or sentinel > candidates[-1]:
        candidates.append(sentinel)
    return candidates

# -*- coding: utf-8 -*-
"""
Experiment harness: datasets, curves, analysis and sequence filtering
"""

from .analysis import (
    Heatmap,
    RespondingKeypoint,
    heatmap_concentration,
    keypoint_heatmap,
    responding_keypoints,
)
from .curves import PRPoint, error_curves, pr_area, pr_curve, pr_point
from .dataset import DatasetEntry, DatasetManifest, load_manifest, split_dataset
from .sequence import FrameResult, filter_sequence

__all__ = [
    'DatasetEntry',
    'DatasetManifest',
    'load_manifest',
    'split_dataset',
    'PRPoint',
    'error_curves',
    'pr_curve',
    'pr_point',
    'pr_area',
    'RespondingKeypoint',
    'Heatmap',
    'responding_keypoints',
    'keypoint_heatmap',
    'heatmap_concentration',
    'FrameResult',
    'filter_sequence',
]

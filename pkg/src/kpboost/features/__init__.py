# -*- coding: utf-8 -*-
"""
Keypoint detection and description
"""

from .detector import (
    Candidate,
    Keypoint,
    ResponseMap,
    ScaleLevel,
    build_response_maps,
    default_scale_levels,
    detect_in_integral,
    detect_keypoints,
    find_local_maxima,
    hessian_response,
    interpolate_scale,
    suppress_imbricated,
)
from .descriptor import (
    DESCRIPTOR_LENGTH,
    NORM_MASS,
    compute_descriptor,
    describe_keypoints,
    sample_gradients,
)
from .extraction import ImageFeatures, extract_features, extract_file, format_fixed

__all__ = [
    'Candidate',
    'Keypoint',
    'ResponseMap',
    'ScaleLevel',
    'default_scale_levels',
    'hessian_response',
    'build_response_maps',
    'find_local_maxima',
    'interpolate_scale',
    'suppress_imbricated',
    'detect_in_integral',
    'detect_keypoints',
    'DESCRIPTOR_LENGTH',
    'NORM_MASS',
    'sample_gradients',
    'compute_descriptor',
    'describe_keypoints',
    'ImageFeatures',
    'extract_features',
    'extract_file',
    'format_fixed',
]

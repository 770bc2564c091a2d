# -*- coding: utf-8 -*-
"""
kpboost - keypoint-presence boosting

Integer-only blob keypoints and 64-D descriptors, AdaBoost over
"keypoint within distance" weak classifiers, and the experiment harness
built around them.
"""

__version__ = "1.0.0"
__license__ = "MIT"
__description__ = "Boosted keypoint-presence visual categorization"

from .core.pipeline import KeypointBoostSystem
from .features.detector import Keypoint, detect_keypoints
from .features.descriptor import compute_descriptor
from .boosting.adaboost import StrongClassifier, WeakClassifier, adaboost_train
from .imaging.image import GrayImage, load_image

__all__ = [
    'KeypointBoostSystem',
    'GrayImage',
    'Keypoint',
    'StrongClassifier',
    'WeakClassifier',
    'load_image',
    'detect_keypoints',
    'compute_descriptor',
    'adaboost_train',
]


def get_version():
    """Get version information"""
    return __version__


def get_system_info():
    """Get system information"""
    import platform
    import sys

    import cv2
    import numpy as np
    import omegaconf
    import pandas as pd

    from .config.settings import AppSettings

    return {
        "kpboost_version": __version__,
        "python_version": sys.version.split()[0],
        "platform": platform.platform(),
        "numpy_version": np.__version__,
        "opencv_version": cv2.__version__,
        "omegaconf_version": omegaconf.__version__,
        "pandas_version": pd.__version__,
        "workers": AppSettings.worker_count(),
    }

# -*- coding: utf-8 -*-
"""Pixel-to-descriptor code must stay in integer arithmetic"""

import ast
from pathlib import Path

import numpy as np
import pytest

import kpboost
from kpboost.config.run_config import DetectorConfig
from kpboost.features.detector import build_response_maps, default_scale_levels, detect_keypoints
from kpboost.features.extraction import extract_features
from kpboost.imaging.integral import integral

PACKAGE = Path(kpboost.__file__).parent
INTEGER_MODULES = [
    "imaging/image.py",
    "imaging/integral.py",
    "features/detector.py",
    "features/descriptor.py",
    "boosting/matching.py",
]


@pytest.mark.parametrize("module", INTEGER_MODULES)
def test_no_true_division_or_float_literals(module):
    tree = ast.parse((PACKAGE / module).read_text(encoding="utf-8"))
    for node in ast.walk(tree):
        assert not (isinstance(node, (ast.BinOp, ast.AugAssign)) and isinstance(node.op, ast.Div)), \
            f"{module}:{node.lineno} uses true division"
        assert not (isinstance(node, ast.Constant) and isinstance(node.value, float)), \
            f"{module}:{node.lineno} has a float literal"


def test_runtime_dtypes(blob_image):
    ii = integral(blob_image)
    assert ii.table.dtype == np.int64
    for m in build_response_maps(ii, default_scale_levels(8)):
        assert m.grid.dtype == np.int64
    features = extract_features(blob_image, DetectorConfig(hessian_threshold=0))
    assert features.descriptors.dtype == np.int32
    for kp in detect_keypoints(blob_image, DetectorConfig(hessian_threshold=0)):
        assert all(isinstance(v, int) for v in (kp.x, kp.y, kp.scale, kp.response))

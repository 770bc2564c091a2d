# -*- coding: utf-8 -*-
"""
Shared fixtures
"""

import numpy as np
import pytest

from kpboost.boosting.matching import build_distance_matrix
from kpboost.imaging.image import GrayImage
from synthetic import pool_from, render_discs, toy_dataset


def pytest_configure(config):
    # enforced by pytest-timeout when installed
    config.addinivalue_line("markers", "timeout(seconds): per-test time limit")


@pytest.fixture
def rng():
    return np.random.default_rng(20090601)


@pytest.fixture
def toy_problem(rng):
    """(matrix, pool, images, labels) for a small random dataset"""
    images, labels = toy_dataset(rng, 5, 6)
    pool = pool_from(images, labels)
    matrix = build_distance_matrix(pool, images, labels, workers=1)
    return matrix, pool, images, labels


@pytest.fixture
def blob_image():
    return render_discs(64, 64, [(32.3, 31.8, 5.0)])


@pytest.fixture
def random_image(rng):
    return GrayImage(rng.integers(0, 256, size=(64, 64)).astype(np.uint8))

# -*- coding: utf-8 -*-
"""
Keypoint matching and boosting
"""

from .adaboost import (
    DECISION_HALF,
    AdaBoostTrainer,
    RoundRecord,
    Selection,
    StrongClassifier,
    ThresholdSearch,
    TrainingState,
    WeakClassifier,
    adaboost_train,
    classify,
    evaluate_weak,
    select_best,
    strong_output,
    vote_trace,
    weak_votes,
    weighted_errors_for_row,
)
from .matching import (
    MAX_DIST,
    DistanceMatrix,
    KeypointRecord,
    build_distance_matrix,
    image_distance,
    sad_distance,
    threshold_candidates,
)
from .model_io import load_model, save_model

__all__ = [
    'DECISION_HALF',
    'MAX_DIST',
    'AdaBoostTrainer',
    'DistanceMatrix',
    'KeypointRecord',
    'RoundRecord',
    'Selection',
    'StrongClassifier',
    'ThresholdSearch',
    'TrainingState',
    'WeakClassifier',
    'adaboost_train',
    'build_distance_matrix',
    'classify',
    'evaluate_weak',
    'image_distance',
    'load_model',
    'sad_distance',
    'save_model',
    'select_best',
    'strong_output',
    'threshold_candidates',
    'vote_trace',
    'weak_votes',
    'weighted_errors_for_row',
]

# -*- coding: utf-8 -*-
"""
Core system module
"""

from .pipeline import EvaluationResult, KeypointBoostSystem, TrainingResult

__all__ = [
    'KeypointBoostSystem',
    'TrainingResult',
    'EvaluationResult',
]

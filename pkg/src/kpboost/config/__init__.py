# -*- coding: utf-8 -*-
"""
Configuration management module
"""

from .settings import AppSettings
from .run_config import (
    DetectorConfig,
    PathsConfig,
    RunConfig,
    TrainingConfig,
    dump_run_config,
    load_run_config,
)

__all__ = [
    'AppSettings',
    'DetectorConfig',
    'TrainingConfig',
    'PathsConfig',
    'RunConfig',
    'load_run_config',
    'dump_run_config',
]

# -*- coding: utf-8 -*-
"""
kpboost Application Settings
Contains paths, constants and environment-driven parameters
"""

import os
from pathlib import Path


class AppSettings:
    """Application settings class"""

    # ==================== Basic Path Configuration ====================
    PROJECT_ROOT = Path(__file__).parent.parent.parent.parent
    CONFIG_ROOT = PROJECT_ROOT / "config"
    DEFAULT_CONFIG_FILE = CONFIG_ROOT / "kpboost.conf"

    # ==================== Environment Configuration ====================
    THREADS_ENV = "KPBOOST_THREADS"

    # ==================== Logging Configuration ====================
    LOG_LEVEL = "INFO"
    LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
    LOG_DATE_FORMAT = "%H:%M:%S"

    # ==================== Output Configuration ====================
    MODEL_FILENAME = "model.txt"
    ROUND_LOG_FILENAME = "rounds.csv"
    RUN_CONFIG_FILENAME = "run.conf"
    SPLIT_FILENAME = "split.csv"
    ERROR_CURVE_FILENAME = "error_curve.csv"
    PR_CURVE_FILENAME = "pr_curve.csv"
    PR_AREA_FILENAME = "pr_areas.csv"
    TIMING_FILENAME = "timing.csv"

    # Overlay colors (BGR)
    KEYPOINT_COLOR = (160, 160, 160)
    RESPONDING_COLOR = (0, 0, 255)

    @classmethod
    def worker_count(cls) -> int:
        """Number of worker threads, capped by the KPBOOST_THREADS environment variable"""
        raw = os.environ.get(cls.THREADS_ENV, "").strip()
        if raw:
            try:
                return max(1, int(raw))
            except ValueError:
                pass
        return max(1, os.cpu_count() or 1)

    @classmethod
    def config_summary(cls) -> dict:
        """Short summary of the environment-driven settings"""
        return {
            "project_root": str(cls.PROJECT_ROOT),
            "default_config": str(cls.DEFAULT_CONFIG_FILE),
            "workers": cls.worker_count(),
            "log_level": cls.LOG_LEVEL,
        }

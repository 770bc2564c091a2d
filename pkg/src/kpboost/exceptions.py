# -*- coding: utf-8 -*-
"""
Exception hierarchy for kpboost
"""


class KpBoostError(Exception):
    """Base class of every error kpboost reports to the user"""


class ImageFormatError(KpBoostError):
    """Unreadable, truncated or unsupported raster file"""


class ConfigurationError(KpBoostError, ValueError):
    """Invalid run configuration or inconsistent inputs"""


class DatasetError(KpBoostError):
    """Malformed manifest or unusable dataset split"""


class TrainingError(KpBoostError):
    """Boosting cannot proceed on the given data"""


class ModelFormatError(KpBoostError):
    """Model file that cannot be parsed or does not match the inputs"""

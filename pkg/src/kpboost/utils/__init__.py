# -*- coding: utf-8 -*-
"""
kpboost utility functions
"""

from .io_utils import ensure_directory, list_frames, safe_file_write, write_csv
from .logging_utils import setup_logging
from .parallel import chunk_ranges, ordered_map, worker_count

__all__ = [
    'ensure_directory',
    'list_frames',
    'safe_file_write',
    'write_csv',
    'setup_logging',
    'ordered_map',
    'chunk_ranges',
    'worker_count',
]

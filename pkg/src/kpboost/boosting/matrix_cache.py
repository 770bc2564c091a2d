# -*- coding: utf-8 -*-
"""
Distance-matrix cache

File layout: little-endian uint32 Q and N, Q*N little-endian int32 entries
in row-major order, then N label bytes. Files are named by a content hash
of the training split and the detector configuration.
"""

import hashlib
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ..config.run_config import DetectorConfig
from ..exceptions import ModelFormatError
from ..utils.io_utils import ensure_directory, safe_file_write
from .matching import DistanceMatrix

logger = logging.getLogger(__name__)

CACHE_SUFFIX = ".kpm"
_HEADER = np.dtype("<u4")
_ENTRY = np.dtype("<i4")


def cache_key(image_entries: Sequence[str], detector: DetectorConfig, tag: str = "train") -> str:
    """Hash of the ordered dataset entries (path and label) and the detector settings"""
    digest = hashlib.sha256()
    digest.update(tag.encode("utf-8"))
    for entry in image_entries:
        digest.update(entry.encode("utf-8"))
        digest.update(b"\n")
    for key, value in sorted(asdict(detector).items()):
        digest.update(f"{key}={value}\n".encode("utf-8"))
    return digest.hexdigest()


def encode_matrix(matrix: DistanceMatrix) -> bytes:
    header = np.array([matrix.q_rows, matrix.n_cols], dtype=_HEADER)
    entries = np.ascontiguousarray(matrix.entries, dtype=_ENTRY)
    labels = np.ascontiguousarray(matrix.labels, dtype=np.uint8)
    return header.tobytes() + entries.tobytes() + labels.tobytes()


def decode_matrix(data: bytes) -> DistanceMatrix:
    header_size = 2 * _HEADER.itemsize
    if len(data) < header_size:
        raise ModelFormatError("Matrix cache truncated in header")
    q_rows, n_cols = (int(v) for v in np.frombuffer(data[:header_size], dtype=_HEADER))
    expected = header_size + q_rows * n_cols * _ENTRY.itemsize + n_cols
    if len(data) != expected:
        raise ModelFormatError(f"Matrix cache size {len(data)} does not match {q_rows}x{n_cols} ({expected} bytes)")
    body_end = header_size + q_rows * n_cols * _ENTRY.itemsize
    entries = np.frombuffer(data[header_size:body_end], dtype=_ENTRY).astype(np.int32).reshape(q_rows, n_cols)
    labels = np.frombuffer(data[body_end:], dtype=np.uint8).copy()
    return DistanceMatrix(entries=entries, labels=labels)


def cache_path(cache_dir: Union[str, Path], key: str) -> Path:
    return Path(cache_dir) / f"{key}{CACHE_SUFFIX}"


def load_cached_matrix(cache_dir: Optional[Union[str, Path]], key: str) -> Optional[DistanceMatrix]:
    """Cached matrix for key, or None on a miss or an unreadable file"""
    if not cache_dir:
        return None
    path = cache_path(cache_dir, key)
    if not path.exists():
        return None
    try:
        matrix = decode_matrix(path.read_bytes())
    except ModelFormatError as e:
        logger.warning("Ignoring corrupt matrix cache %s: %s", path, e)
        return None
    logger.info("Loaded %d x %d distance matrix from cache %s", matrix.q_rows, matrix.n_cols, path.name)
    return matrix


def store_cached_matrix(cache_dir: Optional[Union[str, Path]], key: str, matrix: DistanceMatrix) -> Optional[Path]:
    if not cache_dir:
        return None
    ensure_directory(cache_dir)
    path = safe_file_write(cache_path(cache_dir, key), encode_matrix(matrix))
    logger.debug("Stored distance matrix cache %s", path)
    return path

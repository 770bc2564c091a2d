# -*- coding: utf-8 -*-
"""
Input/output utility functions
Directory handling, frame discovery, atomic writes and CSV tables
"""

import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import pandas as pd

logger = logging.getLogger(__name__)

IMAGE_EXTENSIONS = (".pgm", ".png")

_NUMBER_PATTERN = re.compile(r"(\d+)")


def ensure_directory(dir_path: Union[str, Path]) -> Path:
    """Make sure a directory exists, creating it if needed

    Args:
        dir_path: directory path

    Returns:
        Path: directory path object
    """
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    return dir_path


def find_files_with_extension(
    directory: Union[str, Path],
    extensions: Sequence[str] = IMAGE_EXTENSIONS,
    recursive: bool = False,
) -> List[Path]:
    """Find files with any of the given extensions (case-insensitive)

    Args:
        directory: search directory
        extensions: accepted suffixes such as '.png'
        recursive: whether to search sub-directories

    Returns:
        List[Path]: matching files, sorted by name
    """
    directory = Path(directory)
    if not directory.exists():
        return []

    pattern = "**/*" if recursive else "*"
    wanted = {ext.lower() for ext in extensions}
    return sorted(p for p in directory.glob(pattern) if p.is_file() and p.suffix.lower() in wanted)


def numbered_sort_key(path: Path):
    """Sort key ordering `frame2.png` before `frame10.png`"""
    parts = _NUMBER_PATTERN.split(path.stem)
    return [int(part) if part.isdigit() else part for part in parts], path.suffix


def list_frames(directory: Union[str, Path]) -> List[Path]:
    """List the numbered frames of a sequence directory in frame order"""
    return sorted(find_files_with_extension(directory), key=numbered_sort_key)


def safe_file_write(file_path: Union[str, Path], data: Union[str, bytes], encoding: str = "utf-8") -> Path:
    """Write a file atomically (temporary file then rename)

    Args:
        file_path: target file path
        data: text or bytes to write
        encoding: text encoding

    Returns:
        Path: the written file
    """
    file_path = Path(file_path)
    temp_path = file_path.with_suffix(file_path.suffix + ".tmp")
    file_path.parent.mkdir(parents=True, exist_ok=True)

    try:
        if isinstance(data, bytes):
            temp_path.write_bytes(data)
        else:
            temp_path.write_text(data, encoding=encoding)
        temp_path.replace(file_path)
    except OSError:
        if temp_path.exists():
            temp_path.unlink()
        raise
    return file_path


def write_csv(rows: Iterable[dict], columns: Sequence[str], file_path: Union[str, Path]) -> Path:
    """Write dictionaries as a CSV table with a fixed column order

    An empty row list still produces the header line.
    """
    frame = pd.DataFrame(list(rows), columns=list(columns))
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(file_path, index=False)
    logger.debug("Wrote %d rows to %s", len(frame), file_path)
    return file_path


def read_csv(file_path: Union[str, Path], required: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Read a CSV table, checking required columns"""
    frame = pd.read_csv(file_path, skipinitialspace=True, dtype=str, keep_default_na=False)
    if required:
        missing = [name for name in required if name not in frame.columns]
        if missing:
            raise KeyError(f"{file_path}: missing column(s) {', '.join(missing)}")
    return frame

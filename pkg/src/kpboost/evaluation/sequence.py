# -*- coding: utf-8 -*-
"""
Sequence filtering: keep only the keypoints responding to the model

Frames are the numbered images of a directory. Each frame gets a CSV of
its responding keypoints and, optionally, a side-by-side overlay.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import cv2

from ..boosting.adaboost import StrongClassifier
from ..config.run_config import DetectorConfig
from ..config.settings import AppSettings
from ..exceptions import ImageFormatError
from ..features.extraction import extract_features
from ..imaging.image import load_image
from ..imaging.writers import save_image
from ..utils.io_utils import ensure_directory, list_frames, write_csv
from ..utils.parallel import ordered_map
from .analysis import RespondingKeypoint, render_filtered_pair, responding_keypoints, write_responding

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ["frame", "keypoints", "responding", "milliseconds"]


@dataclass
class FrameResult:
    frame: Path
    keypoints: int
    responding: List[RespondingKeypoint]
    milliseconds: float


def elapsed_ms(start_ticks: int) -> float:
    return (cv2.getTickCount() - start_ticks) * 1000.0 / cv2.getTickFrequency()


def filter_frame(sc: StrongClassifier, frame: Path, cfg: DetectorConfig, out_dir: Optional[Path], overlay: bool):
    """Detect and filter one frame; None if the frame cannot be read"""
    try:
        img = load_image(frame)
    except (ImageFormatError, OSError) as e:
        logger.warning("Skipping unreadable frame %s: %s", frame.name, e)
        return None

    start = cv2.getTickCount()
    features = extract_features(img, cfg)
    responding = responding_keypoints(sc, features)
    milliseconds = elapsed_ms(start)
    logger.info("%s: %d/%d keypoints respond (%.1f ms)", frame.name, len(responding), len(features), milliseconds)

    if out_dir is not None:
        write_responding(responding, out_dir / f"{frame.stem}.csv")
        if overlay:
            save_image(out_dir / f"{frame.stem}_overlay.png", render_filtered_pair(img.pixels, features, responding))
    return FrameResult(frame=frame, keypoints=len(features), responding=responding, milliseconds=milliseconds)


def filter_sequence(
    sc: StrongClassifier,
    frames_dir: Union[str, Path],
    cfg: DetectorConfig,
    out_dir: Optional[Union[str, Path]] = None,
    overlay: bool = False,
    workers: Optional[int] = 1,
) -> List[FrameResult]:
    """Filter every numbered frame of a directory, results in frame order"""
    frames = list_frames(frames_dir)
    if not frames:
        logger.warning("No PGM/PNG frames found in %s", frames_dir)
    if out_dir is not None:
        out_dir = ensure_directory(out_dir)

    results = ordered_map(lambda frame: filter_frame(sc, frame, cfg, out_dir, overlay), frames, workers)
    results = [r for r in results if r is not None]

    if results:
        mean = sum(r.milliseconds for r in results) / len(results)
        logger.info("Filtered %d frames, mean %.1f ms per frame", len(results), mean)
    if out_dir is not None:
        rows = [
            {
                "frame": r.frame.name,
                "keypoints": r.keypoints,
                "responding": len(r.responding),
                "milliseconds": f"{r.milliseconds:.3f}",
            }
            for r in results
        ]
        write_csv(rows, TIMING_COLUMNS, out_dir / AppSettings.TIMING_FILENAME)
    return results

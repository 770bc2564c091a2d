# -*- coding: utf-8 -*-
"""
Line-oriented text model files

    kpboost-model v1 rounds=<T> norm=4096 decision=<q16>/65536
    alpha=<q16>/65536 thr=<int> src=<image>:<keypoint> <64 descriptor integers>
"""

import logging
import re
from pathlib import Path
from typing import List, Union

import numpy as np

from ..exceptions import ModelFormatError
from ..features.descriptor import DESCRIPTOR_LENGTH, NORM_MASS, format_descriptor
from ..utils.io_utils import safe_file_write
from .adaboost import StrongClassifier, WeakClassifier
from .fixedpoint import Q16_ONE

logger = logging.getLogger(__name__)

MODEL_MAGIC = "kpboost-model"
MODEL_VERSION = "v1"

_HEADER_RE = re.compile(
    rf"^{MODEL_MAGIC} {MODEL_VERSION} rounds=(\d+) norm=(\d+) decision=(\d+)/(\d+)$"
)
_ROUND_RE = re.compile(r"^alpha=(\d+)/(\d+) thr=(\d+) src=(\d+):(\d+) (.*)$")


def format_model(sc: StrongClassifier) -> str:
    lines = [f"{MODEL_MAGIC} {MODEL_VERSION} rounds={len(sc)} norm={NORM_MASS} decision={sc.decision}/{Q16_ONE}"]
    for w in sc.rounds:
        lines.append(
            f"alpha={w.alpha}/{Q16_ONE} thr={w.threshold} src={w.source_image}:{w.keypoint_id} "
            f"{format_descriptor(w.descriptor)}"
        )
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> StrongClassifier:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ModelFormatError("Empty model file")

    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise ModelFormatError(f"Bad model header: {lines[0]!r}")
    count, norm, decision, decision_den = (int(g) for g in header.groups())
    if norm != NORM_MASS:
        raise ModelFormatError(f"Model normalized to {norm}, this build uses {NORM_MASS}")
    if decision_den != Q16_ONE:
        raise ModelFormatError(f"Unsupported decision denominator {decision_den}")
    if len(lines) - 1 != count:
        raise ModelFormatError(f"Header announces {count} rounds, file has {len(lines) - 1}")

    rounds: List[WeakClassifier] = []
    for number, line in enumerate(lines[1:], start=2):
        match = _ROUND_RE.match(line)
        if match is None:
            raise ModelFormatError(f"line {number}: malformed round {line[:60]!r}")
        alpha, alpha_den, threshold, source, keypoint = (int(g) for g in match.groups()[:5])
        if alpha_den != Q16_ONE:
            raise ModelFormatError(f"line {number}: unsupported alpha denominator {alpha_den}")
        if alpha <= 0 or threshold <= 0:
            raise ModelFormatError(f"line {number}: alpha and threshold must be positive")
        tokens = match.group(6).split()
        if len(tokens) != DESCRIPTOR_LENGTH:
            raise ModelFormatError(f"line {number}: expected {DESCRIPTOR_LENGTH} descriptor values, got {len(tokens)}")
        try:
            descriptor = np.array([int(t) for t in tokens], dtype=np.int32)
        except ValueError as e:
            raise ModelFormatError(f"line {number}: {e}") from e
        rounds.append(WeakClassifier(
            descriptor=descriptor,
            threshold=threshold,
            alpha=alpha,
            keypoint_id=keypoint,
            source_image=source,
        ))
    return StrongClassifier(rounds=tuple(rounds), decision=decision)


def save_model(sc: StrongClassifier, path: Union[str, Path]) -> Path:
    path = safe_file_write(path, format_model(sc))
    logger.info("Model with %d rounds saved to %s", len(sc), path)
    return path


def load_model(path: Union[str, Path]) -> StrongClassifier:
    path = Path(path)
    if not path.exists():
        raise ModelFormatError(f"Model file does not exist: {path}")
    sc = parse_model(path.read_text(encoding="utf-8"))
    if not sc.rounds:
        raise ModelFormatError(f"Model {path} has no rounds")
    return sc

# -*- coding: utf-8 -*-
"""
kpboost System Controller
Wires configuration, feature extraction, matrix caching, training and evaluation
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..boosting.adaboost import StrongClassifier, TrainingState, adaboost_train, vote_trace
from ..boosting.fixedpoint import Q16_ONE, Q32_ONE
from ..boosting.matching import DistanceMatrix, KeypointRecord, build_distance_matrix, rows_without_zero
from ..boosting.matrix_cache import cache_key, load_cached_matrix, store_cached_matrix
from ..boosting.model_io import load_model, save_model
from ..config.run_config import RunConfig, dump_run_config
from ..config.settings import AppSettings
from ..evaluation.analysis import (
    Heatmap,
    RespondingKeypoint,
    heatmap_concentration,
    keypoint_heatmap,
    render_responding,
    responding_keypoints,
    save_heatmap,
    write_responding,
)
from ..evaluation.curves import (
    ERROR_CURVE_COLUMNS,
    PR_COLUMNS,
    ErrorCurvePoint,
    PRPoint,
    best_balanced_point,
    error_curves,
    pr_area,
    pr_curve,
)
from ..evaluation.dataset import DatasetEntry, DatasetManifest, check_split, load_manifest, save_manifest, split_dataset
from ..evaluation.sequence import FrameResult, filter_sequence
from ..exceptions import ConfigurationError, TrainingError
from ..features.extraction import ImageFeatures, extract_file, extract_features
from ..imaging.image import load_image
from ..imaging.writers import save_image
from ..utils.io_utils import ensure_directory, safe_file_write, write_csv
from ..utils.parallel import ordered_map, worker_count

logger = logging.getLogger(__name__)

ROUND_COLUMNS = [
    "round", "keypoint", "source_image", "threshold",
    "eps", "eps_effective", "alpha", "alpha_q16", "train_error", "test_error",
]
PR_AREA_COLUMNS = ["rounds", "area", "precision", "recall"]
VOTE_COLUMNS = ["round", "output"]


@dataclass
class TrainingResult:
    model: StrongClassifier
    state: TrainingState
    pool_size: int
    model_path: Path
    out_dir: Path


@dataclass
class EvaluationResult:
    curve: List[ErrorCurvePoint]
    pr_points: List[PRPoint]
    out_dir: Path


def _entry_key(entry: DatasetEntry) -> str:
    return f"{entry.path}|{entry.label}"


class KeypointBoostSystem:
    """kpboost system controller"""

    def __init__(self, config: RunConfig, workers: Optional[int] = None):
        self.config = config
        self.workers = worker_count(workers)
        logger.debug("System ready: %d worker thread(s), %s", self.workers, AppSettings.config_summary())

    # ==================== Paths ====================

    def output_dir(self) -> Path:
        return ensure_directory(self.config.paths.out or "runs")

    def model_path(self) -> Path:
        if self.config.paths.model:
            return Path(self.config.paths.model)
        return self.output_dir() / AppSettings.MODEL_FILENAME

    def load_model(self) -> StrongClassifier:
        return load_model(self.model_path())

    # ==================== Dataset and features ====================

    def load_dataset(self) -> DatasetManifest:
        """Load the configured manifest and split it unless it carries its own split"""
        path = self.config.paths.manifest
        if not path:
            raise ConfigurationError("No dataset manifest given (--manifest or paths.manifest)")
        manifest = load_manifest(path)
        if not manifest.is_split:
            training = self.config.training
            manifest = split_dataset(manifest, training.seed, training.train_fraction_pos, training.train_fraction_neg)
        check_split(manifest)
        return manifest

    def extract(self, paths: Sequence[Path]) -> List[ImageFeatures]:
        """Keypoints and descriptors of every image, in input order"""
        cfg = self.config.detector
        features = ordered_map(lambda p: extract_file(p, cfg), list(paths), self.workers)
        logger.info("Extracted %d keypoints from %d images", sum(len(f) for f in features), len(features))
        return features

    @staticmethod
    def build_pool(features: Sequence[ImageFeatures], labels: Sequence[int]) -> List[KeypointRecord]:
        """Every keypoint of every positive image, numbered in image order"""
        pool: List[KeypointRecord] = []
        for image_index, (image, label) in enumerate(zip(features, labels)):
            if label != 1:
                continue
            for kp, descriptor in zip(image.keypoints, image.descriptors):
                pool.append(KeypointRecord(id=len(pool), image_index=image_index, keypoint=kp, descriptor=descriptor))
        return pool

    def distance_matrix(
        self,
        pool: Sequence[KeypointRecord],
        features: Sequence[ImageFeatures],
        labels: Sequence[int],
        key_entries: Sequence[str],
        tag: str,
        check_sources: bool = True,
    ) -> DistanceMatrix:
        """Distance matrix from the cache when available, built and cached otherwise"""
        cache_dir = self.config.paths.cache
        key = cache_key(key_entries, self.config.detector, tag)
        cached = load_cached_matrix(cache_dir, key)
        if cached is not None and cached.q_rows == len(pool) and cached.n_cols == len(features):
            return cached
        matrix = build_distance_matrix(
            pool, [f.descriptors for f in features], labels, check_sources=check_sources, workers=self.workers
        )
        store_cached_matrix(cache_dir, key, matrix)
        return matrix

    # ==================== Training ====================

    def train(self) -> TrainingResult:
        """Train a model and record it with its round log, config and split"""
        training = self.config.training
        manifest = self.load_dataset()
        train, test = manifest.train, manifest.test

        train_features = self.extract([e.path for e in train])
        test_features = self.extract([e.path for e in test])
        train_labels = [e.label for e in train]
        test_labels = [e.label for e in test]

        pool = self.build_pool(train_features, train_labels)
        if not pool:
            raise TrainingError("No keypoints detected on the positive training images")
        logger.info("Positive keypoint pool: %d keypoints", len(pool))

        train_keys = [_entry_key(e) for e in train]
        matrix = self.distance_matrix(pool, train_features, train_labels, train_keys, "train")
        missing = rows_without_zero(matrix)
        if missing:
            logger.warning("%d matrix rows lack a zero at their source image", len(missing))
        test_matrix = self.distance_matrix(
            pool, test_features, test_labels, train_keys + ["--"] + [_entry_key(e) for e in test], "test",
            check_sources=False,
        )

        model, state = adaboost_train(
            matrix, pool, training.rounds, decision=training.decision, test_matrix=test_matrix, workers=self.workers
        )
        if len(model) < training.rounds:
            logger.info("Training stopped early with %d of %d rounds", len(model), training.rounds)

        out_dir = self.output_dir()
        model_path = save_model(model, self.model_path())
        write_csv([self._round_row(r) for r in state.round_log], ROUND_COLUMNS, out_dir / AppSettings.ROUND_LOG_FILENAME)
        safe_file_write(out_dir / AppSettings.RUN_CONFIG_FILENAME, dump_run_config(self.config))
        save_manifest(manifest, out_dir / AppSettings.SPLIT_FILENAME)
        return TrainingResult(model=model, state=state, pool_size=len(pool), model_path=model_path, out_dir=out_dir)

    @staticmethod
    def _round_row(record) -> dict:
        return {
            "round": record.round,
            "keypoint": record.keypoint_id,
            "source_image": record.source_image,
            "threshold": record.threshold,
            "eps": f"{record.eps / Q32_ONE:.8f}",
            "eps_effective": f"{record.eps_effective / Q32_ONE:.8f}",
            "alpha": f"{record.alpha / Q16_ONE:.6f}",
            "alpha_q16": record.alpha,
            "train_error": f"{float(record.train_error):.6f}",
            "test_error": "" if record.test_error is None else f"{float(record.test_error):.6f}",
        }

    # ==================== Evaluation ====================

    @staticmethod
    def traces(model: StrongClassifier, features: Sequence[ImageFeatures]) -> np.ndarray:
        """(images, rounds) matrix of prefix outputs, one extraction pass per image"""
        if not features:
            return np.zeros((0, len(model)), dtype=np.int64)
        return np.array([vote_trace(model, f.descriptors) for f in features], dtype=np.int64)

    def _split_traces(self, model: StrongClassifier, manifest: DatasetManifest):
        train, test = manifest.train, manifest.test
        train_traces = self.traces(model, self.extract([e.path for e in train]))
        test_traces = self.traces(model, self.extract([e.path for e in test]))
        return train_traces, [e.label for e in train], test_traces, [e.label for e in test]

    def evaluate(self) -> EvaluationResult:
        """Per-round error curve on both splits and the test PR curve of the full model"""
        model = self.load_model()
        manifest = self.load_dataset()
        train_traces, train_labels, test_traces, test_labels = self._split_traces(model, manifest)

        curve = error_curves(train_traces, train_labels, test_traces, test_labels, model.decision)
        points = pr_curve(test_traces[:, -1], test_labels, model.decision)

        out_dir = self.output_dir()
        write_csv([p.as_row() for p in curve], ERROR_CURVE_COLUMNS, out_dir / AppSettings.ERROR_CURVE_FILENAME)
        write_csv([p.as_row() for p in points], PR_COLUMNS, out_dir / AppSettings.PR_CURVE_FILENAME)
        if curve:
            last = curve[-1]
            logger.info(
                "Round %d: train error %.4f, test error %.4f",
                last.round, float(last.train_error), float(last.test_error or 0),
            )
        return EvaluationResult(curve=curve, pr_points=points, out_dir=out_dir)

    def pr_curves(self, prefixes: Optional[Sequence[int]] = None) -> Dict[int, Tuple[List[PRPoint], Fraction]]:
        """Test PR curves of model prefixes with their step-interpolated areas"""
        model = self.load_model()
        manifest = self.load_dataset()
        test = manifest.test
        test_traces = self.traces(model, self.extract([e.path for e in test]))
        test_labels = [e.label for e in test]

        wanted = sorted(set(prefixes or [len(model)]))
        out_dir = self.output_dir()
        results: Dict[int, Tuple[List[PRPoint], Fraction]] = {}
        area_rows = []
        for rounds in wanted:
            if not 1 <= rounds <= len(model):
                logger.warning("Skipping prefix %d: model has %d rounds", rounds, len(model))
                continue
            points = pr_curve(test_traces[:, rounds - 1], test_labels, model.decision)
            area = pr_area(points)
            results[rounds] = (points, area)
            write_csv([p.as_row() for p in points], PR_COLUMNS, out_dir / f"pr_curve_{rounds}.csv")
            best = best_balanced_point(points)
            area_rows.append({
                "rounds": rounds,
                "area": f"{float(area):.6f}",
                "precision": f"{float(best.precision):.6f}" if best else "",
                "recall": f"{float(best.recall):.6f}" if best else "",
            })
            logger.info("Prefix %d: PR area %.4f", rounds, float(area))
        write_csv(area_rows, PR_AREA_COLUMNS, out_dir / AppSettings.PR_AREA_FILENAME)
        return results

    # ==================== Analysis ====================

    def heatmap(self, feature: int) -> Tuple[Heatmap, Fraction]:
        """Heatmap of one feature over all positive images of the manifest"""
        model = self.load_model()
        manifest = self.load_dataset()
        positives = [e for e in manifest.entries if e.label == 1]
        features = self.extract([e.path for e in positives])
        heatmap = keypoint_heatmap(model, feature, features, [e.path.name for e in positives])
        concentration = heatmap_concentration(heatmap)
        save_heatmap(heatmap, self.output_dir())
        logger.info("Feature %d: %.1f%% of hits inside the densest quarter window", feature, 100 * float(concentration))
        return heatmap, concentration

    def responding(self, image_path: Union[str, Path]) -> List[RespondingKeypoint]:
        """Responding keypoints of one image, as CSV and overlay"""
        model = self.load_model()
        img = load_image(image_path)
        features = extract_features(img, self.config.detector)
        result = responding_keypoints(model, features)
        stem = Path(image_path).stem
        out_dir = self.output_dir()
        write_responding(result, out_dir / f"{stem}_responding.csv")
        save_image(out_dir / f"{stem}_responding.png", render_responding(img.pixels, features, result))
        return result

    def votes(self, image_path: Union[str, Path]) -> List[int]:
        """Per-round strong output of one image"""
        model = self.load_model()
        features = extract_file(image_path, self.config.detector)
        trace = vote_trace(model, features.descriptors)
        rows = [{"round": t + 1, "output": f"{v / Q16_ONE:.6f}"} for t, v in enumerate(trace)]
        write_csv(rows, VOTE_COLUMNS, self.output_dir() / f"{Path(image_path).stem}_votes.csv")
        return trace

    def filter_sequence(self, frames_dir: Union[str, Path], overlay: bool = False) -> List[FrameResult]:
        model = self.load_model()
        return filter_sequence(model, frames_dir, self.config.detector, self.output_dir(), overlay, workers=self.workers)

# -*- coding: utf-8 -*-
"""
Keypoint-presence weak classifiers and discrete AdaBoost

A weak classifier answers 1 on an image iff one of the image's descriptors
lies strictly within `threshold` SAD of its reference descriptor. Example
weights are Q32 integers, vote weights (alpha) Q16 integers.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ConfigurationError, TrainingError
from ..utils.parallel import chunk_ranges, ordered_map
from .fixedpoint import Q16_ONE, Q16_SHIFT, Q32_ONE, Q32_SHIFT, exp_q32, half_log_odds_q16, q16_to_q32
from .matching import DistanceMatrix, KeypointRecord, distances_to_image, image_distance, threshold_candidates

logger = logging.getLogger(__name__)

# default decision: half of the total vote mass, in Q16
DECISION_HALF = Q16_ONE >> 1

SEARCH_ROW_CHUNK = 512


@dataclass(frozen=True)
class WeakClassifier:
    """Reference descriptor, strict distance threshold and Q16 vote weight"""

    descriptor: np.ndarray
    threshold: int
    alpha: int
    keypoint_id: int
    source_image: int


@dataclass(frozen=True)
class StrongClassifier:
    """Ordered weak classifiers and the Q16 decision fraction of the vote mass"""

    rounds: Tuple[WeakClassifier, ...]
    decision: int = DECISION_HALF

    def __len__(self) -> int:
        return len(self.rounds)

    def prefix(self, count: int) -> "StrongClassifier":
        return StrongClassifier(rounds=self.rounds[:count], decision=self.decision)

    def references(self) -> np.ndarray:
        return np.stack([w.descriptor for w in self.rounds]).astype(np.int64)

    def thresholds(self) -> np.ndarray:
        return np.array([w.threshold for w in self.rounds], dtype=np.int64)

    def alphas(self) -> np.ndarray:
        return np.array([w.alpha for w in self.rounds], dtype=np.int64)


class Selection(NamedTuple):
    error: int
    row: int
    threshold: int


@dataclass
class RoundRecord:
    """One boosting round; eps values are Q32 fractions of the weight mass"""

    round: int
    keypoint_id: int
    source_image: int
    threshold: int
    eps: int
    eps_effective: int
    alpha: int
    train_error: Fraction
    clamped: bool = False
    test_error: Optional[Fraction] = None


@dataclass
class TrainingState:
    weights: np.ndarray
    labels: np.ndarray
    round_log: List[RoundRecord] = field(default_factory=list)

    @classmethod
    def uniform(cls, labels: Sequence[int]) -> "TrainingState":
        labels = np.asarray(labels, dtype=np.uint8)
        n = labels.size
        return cls(weights=np.full(n, Q32_ONE // n, dtype=np.int64), labels=labels)

    @property
    def total(self) -> int:
        return int(self.weights.sum())


# ==================== Weak classifier search ====================

def split_errors(sorted_weights: np.ndarray, sorted_positive: np.ndarray, splits: np.ndarray) -> np.ndarray:
    """Weighted error of `distance < t` at each split point, one row per distance row

    Weights and labels are (rows, n) in ascending distance order; splits[r, c]
    counts the images candidate c of row r accepts. The error is the missed
    positive mass plus the accepted negative mass.
    """
    rows, n = sorted_weights.shape
    pos_prefix = np.zeros((rows, n + 1), dtype=np.int64)
    neg_prefix = np.zeros_like(pos_prefix)
    pos_prefix[:, 1:] = np.cumsum(np.where(sorted_positive, sorted_weights, 0), axis=1)
    neg_prefix[:, 1:] = np.cumsum(np.where(sorted_positive, 0, sorted_weights), axis=1)
    return (
        pos_prefix[:, -1:]
        - np.take_along_axis(pos_prefix, splits, axis=1)
        + np.take_along_axis(neg_prefix, splits, axis=1)
    )


def weighted_errors_for_row(
    sorted_distances: Sequence[int],
    weights: Sequence[int],
    labels: Sequence[int],
    candidates: Sequence[int],
) -> List[Tuple[int, int]]:
    """Weighted error of `distance < t` for every candidate t of one row

    Distances must be sorted ascending with weights and labels co-sorted.
    """
    distances = np.asarray(sorted_distances, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.int64)
    positive = np.asarray(labels).astype(bool)
    splits = np.searchsorted(distances, np.asarray(candidates, dtype=np.int64), side="left")
    errors = split_errors(weights[None, :], positive[None, :], splits[None, :])[0]
    return [(int(t), int(e)) for t, e in zip(candidates, errors)]


class ThresholdSearch:
    """Per-row sort orders, candidate thresholds and their split points

    Built once per distance matrix; each boosting round then evaluates all
    (row, candidate) errors with vectorized prefix sums over row chunks.
    """

    def __init__(self, matrix: DistanceMatrix, workers: Optional[int] = None, chunk: int = SEARCH_ROW_CHUNK):
        if matrix.q_rows == 0 or matrix.n_cols == 0:
            raise TrainingError("Empty distance matrix: no pool keypoints or no training images")
        self.matrix = matrix
        self.workers = workers
        self.chunk = chunk

        entries = matrix.entries
        self.order = np.argsort(entries, axis=1, kind="stable")
        sorted_rows = np.take_along_axis(entries, self.order, axis=1)

        per_row = [threshold_candidates(row) for row in sorted_rows]
        width = max(len(c) for c in per_row)
        self.thresholds = np.zeros((matrix.q_rows, width), dtype=np.int32)
        self.splits = np.zeros((matrix.q_rows, width), dtype=np.int32)
        self.valid = np.zeros((matrix.q_rows, width), dtype=bool)
        for i, candidates in enumerate(per_row):
            k = len(candidates)
            self.thresholds[i, :k] = candidates
            self.splits[i, :k] = np.searchsorted(sorted_rows[i], candidates, side="left")
            self.valid[i, :k] = True
        logger.debug("Threshold search: %d rows, up to %d candidates each", matrix.q_rows, width)

    def candidates(self, row: int) -> List[int]:
        return [int(t) for t in self.thresholds[row][self.valid[row]]]

    def select(self, weights: np.ndarray) -> Selection:
        positive = self.matrix.labels.astype(bool)
        weights = np.asarray(weights, dtype=np.int64)
        unreachable = np.iinfo(np.int64).max

        def scan(rows: range) -> Selection:
            order = self.order[rows.start:rows.stop]
            count = order.shape[0]
            errors = split_errors(weights[order], positive[order], self.splits[rows.start:rows.stop])
            errors = np.where(self.valid[rows.start:rows.stop], errors, unreachable)
            cols = errors.argmin(axis=1)
            row_best = errors[np.arange(count), cols]
            r = int(row_best.argmin())
            return Selection(int(row_best[r]), rows.start + r, int(self.thresholds[rows.start + r, cols[r]]))

        # tuple order: error, then row, then threshold
        return min(ordered_map(scan, chunk_ranges(self.matrix.q_rows, self.chunk), self.workers))


def select_best(
    matrix: DistanceMatrix,
    state: TrainingState,
    search: Optional[ThresholdSearch] = None,
) -> Selection:
    """Globally lowest weighted error over every (row, candidate threshold)"""
    if state.weights.shape[0] != matrix.n_cols:
        raise ConfigurationError(f"{state.weights.shape[0]} weights for {matrix.n_cols} matrix columns")
    search = search or ThresholdSearch(matrix)
    return search.select(state.weights)


# ==================== Boosting ====================

class AdaBoostTrainer:
    """Discrete AdaBoost over keypoint-presence features, one round per step()"""

    def __init__(
        self,
        matrix: DistanceMatrix,
        pool: Sequence[KeypointRecord],
        decision: int = DECISION_HALF,
        test_matrix: Optional[DistanceMatrix] = None,
        workers: Optional[int] = None,
    ):
        if len(pool) != matrix.q_rows:
            raise ConfigurationError(f"Pool of {len(pool)} keypoints for a matrix of {matrix.q_rows} rows")
        labels = np.asarray(matrix.labels, dtype=np.uint8)
        if labels.size == 0 or labels.min() == labels.max():
            raise TrainingError("Training needs at least one positive and one negative image")
        if test_matrix is not None and test_matrix.q_rows != matrix.q_rows:
            raise ConfigurationError("Test matrix rows do not match the training pool")

        self.matrix = matrix
        self.pool = pool
        self.decision = decision
        self.test_matrix = test_matrix
        self.search = ThresholdSearch(matrix, workers=workers)
        self.state = TrainingState.uniform(labels)
        self.weak: List[WeakClassifier] = []

        self._alpha_total = 0
        self._train_votes = np.zeros(matrix.n_cols, dtype=np.int64)
        self._test_votes = np.zeros(test_matrix.n_cols if test_matrix is not None else 0, dtype=np.int64)

    @property
    def classifier(self) -> StrongClassifier:
        return StrongClassifier(rounds=tuple(self.weak), decision=self.decision)

    def _error_rate(self, votes: np.ndarray, labels: np.ndarray) -> Fraction:
        predicted = (votes << Q16_SHIFT) >= self.decision * self._alpha_total
        return Fraction(int((predicted != labels.astype(bool)).sum()), labels.size)

    def step(self) -> Optional[RoundRecord]:
        """Run one round; None when no feature beats chance on the current weights"""
        state = self.state
        n = self.matrix.n_cols
        total = state.total
        best = self.search.select(state.weights)

        if 2 * best.error >= total:
            logger.warning(
                "Stopping after %d rounds: best weighted error %.4f is not below 1/2",
                len(self.weak), best.error / total,
            )
            return None

        clamped = best.error * 4 * n < total
        if clamped:
            alpha = half_log_odds_q16(4 * n - 1, 1)
            eps_effective = Q32_ONE // (4 * n)
        else:
            alpha = half_log_odds_q16(total - best.error, best.error)
            eps_effective = (best.error << Q32_SHIFT) // total
        eps = (best.error << Q32_SHIFT) // total

        record = self.pool[best.row]
        self.weak.append(WeakClassifier(
            descriptor=np.asarray(record.descriptor, dtype=np.int32),
            threshold=best.threshold,
            alpha=alpha,
            keypoint_id=record.id,
            source_image=record.image_index,
        ))

        accepted = self.matrix.entries[best.row] < best.threshold
        correct = accepted == state.labels.astype(bool)
        shrink = exp_q32(-q16_to_q32(alpha))
        grow = exp_q32(q16_to_q32(alpha))
        scaled = [(int(w) * (shrink if ok else grow)) >> Q32_SHIFT for w, ok in zip(state.weights, correct)]
        scaled_total = sum(scaled)
        state.weights = np.array([s * Q32_ONE // scaled_total for s in scaled], dtype=np.int64)

        self._alpha_total += alpha
        self._train_votes += alpha * accepted
        train_error = self._error_rate(self._train_votes, state.labels)
        test_error = None
        if self.test_matrix is not None:
            self._test_votes += alpha * (self.test_matrix.entries[best.row] < best.threshold)
            test_error = self._error_rate(self._test_votes, self.test_matrix.labels)

        entry = RoundRecord(
            round=len(self.weak),
            keypoint_id=record.id,
            source_image=record.image_index,
            threshold=best.threshold,
            eps=eps,
            eps_effective=eps_effective,
            alpha=alpha,
            train_error=train_error,
            clamped=clamped,
            test_error=test_error,
        )
        state.round_log.append(entry)
        logger.info(
            "Round %d: keypoint %d (image %d) thr=%d eps=%.4f alpha=%.4f train_error=%.4f%s",
            entry.round, entry.keypoint_id, entry.source_image, entry.threshold,
            eps / Q32_ONE, alpha / Q16_ONE, float(train_error),
            "" if test_error is None else f" test_error={float(test_error):.4f}",
        )
        return entry

    def train(self, rounds: int) -> Tuple[StrongClassifier, TrainingState]:
        if rounds < 1:
            raise TrainingError(f"Round count must be at least 1 (got {rounds})")
        for _ in range(rounds):
            if self.step() is None:
                break
        if not self.weak:
            raise TrainingError("No keypoint feature beats chance on the training set")
        return self.classifier, self.state


def adaboost_train(
    matrix: DistanceMatrix,
    pool: Sequence[KeypointRecord],
    rounds: int,
    decision: int = DECISION_HALF,
    test_matrix: Optional[DistanceMatrix] = None,
    workers: Optional[int] = None,
) -> Tuple[StrongClassifier, TrainingState]:
    """Train a strong classifier of at most `rounds` keypoint-presence features"""
    if rounds < 1:
        raise TrainingError(f"Round count must be at least 1 (got {rounds})")
    trainer = AdaBoostTrainer(matrix, pool, decision=decision, test_matrix=test_matrix, workers=workers)
    return trainer.train(rounds)


# ==================== Inference ====================

def evaluate_weak(w: WeakClassifier, image_descriptors) -> int:
    return int(image_distance(w.descriptor, image_descriptors) < w.threshold)


def weak_votes(sc: StrongClassifier, image_descriptors) -> np.ndarray:
    """Vote (0 or 1) of every round on one image"""
    if not sc.rounds:
        return np.zeros(0, dtype=np.int64)
    distances = distances_to_image(sc.references(), image_descriptors)
    return (distances < sc.thresholds()).astype(np.int64)


def strong_output(sc: StrongClassifier, image_descriptors) -> int:
    """Normalized vote sum_t(alpha_t h_t) / sum_t(alpha_t) in Q16, truncated"""
    alphas = sc.alphas()
    total = int(alphas.sum())
    if total == 0:
        return 0
    return (int((alphas * weak_votes(sc, image_descriptors)).sum()) << Q16_SHIFT) // total


def vote_trace(sc: StrongClassifier, image_descriptors) -> List[int]:
    """strong_output of every prefix of the classifier, first round first"""
    alphas = sc.alphas()
    if alphas.size == 0:
        return []
    votes = np.cumsum(alphas * weak_votes(sc, image_descriptors))
    mass = np.cumsum(alphas)
    return [int(v) for v in (votes << Q16_SHIFT) // mass]


def is_positive(output: int, decision: int = DECISION_HALF) -> bool:
    return output >= decision


def classify(sc: StrongClassifier, image_descriptors) -> bool:
    return is_positive(strong_output(sc, image_descriptors), sc.decision)

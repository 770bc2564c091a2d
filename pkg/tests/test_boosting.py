# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from kpboost.boosting.adaboost import (
    DECISION_HALF,
    AdaBoostTrainer,
    StrongClassifier,
    ThresholdSearch,
    TrainingState,
    WeakClassifier,
    adaboost_train,
    classify,
    evaluate_weak,
    is_positive,
    select_best,
    split_errors,
    strong_output,
    vote_trace,
    weak_votes,
    weighted_errors_for_row,
)
from kpboost.boosting.fixedpoint import Q16_ONE, Q32_ONE, half_log_odds_q16
from kpboost.boosting.matching import DistanceMatrix, build_distance_matrix, threshold_candidates
from kpboost.boosting.model_io import format_model
from kpboost.exceptions import TrainingError
from synthetic import pool_from, toy_dataset


def unit(index, sign=1):
    d = np.zeros(64, dtype=np.int32)
    d[index] = sign * 4096
    return d


def weak(descriptor, threshold=1, alpha=Q16_ONE, kp=0, src=0):
    return WeakClassifier(descriptor=descriptor, threshold=threshold, alpha=alpha, keypoint_id=kp, source_image=src)


def separable_problem():
    """Positives share one descriptor that no negative has"""
    shared = unit(0)
    images = [np.stack([shared, unit(1 + j)]) for j in range(3)]
    images += [np.stack([unit(10 + j, -1)]) for j in range(3)]
    labels = [1, 1, 1, 0, 0, 0]
    pool = pool_from(images, labels)
    return build_distance_matrix(pool, images, labels, workers=1), pool, images, labels


# ==================== Weak classifier search ====================

def test_weighted_errors_toy():
    distances = [0, 3, 7, 7]
    labels = [1, 1, 0, 0]
    weights = [Q32_ONE // 4] * 4
    candidates = threshold_candidates(distances)
    assert candidates == [1, 5, 8]
    errors = dict(weighted_errors_for_row(distances, weights, labels, candidates))
    assert errors[1] == Q32_ONE // 4
    assert errors[5] == 0
    assert errors[8] == Q32_ONE // 2


def test_split_errors_per_row():
    weights = np.array([[1, 2, 3, 4], [4, 3, 2, 1]], dtype=np.int64)
    positive = np.array([[1, 0, 1, 0], [1, 1, 0, 0]], dtype=bool)
    splits = np.array([[0, 2, 4], [0, 2, 3]])
    assert split_errors(weights, positive, splits).tolist() == [[4, 5, 6], [7, 0, 2]]


def test_search_rows_agree_with_single_row_errors(toy_problem, rng):
    matrix = toy_problem[0]
    weights = rng.integers(1, 1 << 20, matrix.n_cols).astype(np.int64)
    search = ThresholdSearch(matrix, workers=1)
    best = search.select(weights)
    per_row = []
    for i, row in enumerate(matrix.entries):
        order = np.argsort(row, kind="stable")
        errors = weighted_errors_for_row(row[order], weights[order], matrix.labels[order], search.candidates(i))
        per_row.append(min((e, i, t) for t, e in errors))
    assert tuple(best) == min(per_row)


def test_weighted_errors_match_naive(rng):
    for _ in range(50):
        n = int(rng.integers(2, 15))
        row = np.sort(rng.integers(0, 30, size=n))
        labels = rng.integers(0, 2, size=n)
        weights = rng.integers(1, 1000, size=n)
        candidates = threshold_candidates(row)
        for t, err in weighted_errors_for_row(row, weights, labels, candidates):
            naive = sum(int(w) for d, w, y in zip(row, weights, labels) if (d < t) != bool(y))
            assert err == naive


def exhaustive_best(matrix, weights):
    best = None
    for i, row in enumerate(matrix.entries):
        for t in threshold_candidates(row):
            err = sum(int(w) for d, w, y in zip(row, weights, matrix.labels) if (d < t) != bool(y))
            key = (err, i, t)
            if best is None or key < best:
                best = key
    return best


def test_selection_matches_exhaustive_search(rng):
    for _ in range(20):
        q = int(rng.integers(1, 9))
        n = int(rng.integers(2, 17))
        labels = np.zeros(n, dtype=np.uint8)
        labels[: int(rng.integers(1, n))] = 1
        entries = rng.integers(0, 20, size=(q, n)).astype(np.int32)
        matrix = DistanceMatrix(entries=entries, labels=labels)
        state = TrainingState(weights=rng.integers(1, 1 << 20, size=n).astype(np.int64), labels=labels)
        assert tuple(select_best(matrix, state)) == exhaustive_best(matrix, state.weights)
        chunked = ThresholdSearch(matrix, workers=2, chunk=3)
        assert tuple(chunked.select(state.weights)) == exhaustive_best(matrix, state.weights)


def test_search_candidates_per_row(toy_problem):
    matrix = toy_problem[0]
    search = ThresholdSearch(matrix)
    for i in range(matrix.q_rows):
        assert search.candidates(i) == threshold_candidates(matrix.entries[i])


# ==================== Boosting ====================

def test_single_class_is_rejected(rng):
    images, _ = toy_dataset(rng, 3, 0)
    labels = [1, 1, 1]
    pool = pool_from(images, labels)
    matrix = build_distance_matrix(pool, images, labels)
    with pytest.raises(TrainingError):
        AdaBoostTrainer(matrix, pool)


def test_round_count_must_be_positive(toy_problem):
    matrix, pool, _, _ = toy_problem
    with pytest.raises(TrainingError):
        adaboost_train(matrix, pool, 0)


def test_uniform_initial_weights():
    state = TrainingState.uniform([1, 0, 0, 1])
    assert state.weights.tolist() == [Q32_ONE // 4] * 4


def test_boosting_invariants(rng):
    for _ in range(25):
        images, labels = toy_dataset(rng, int(rng.integers(2, 6)), int(rng.integers(2, 6)))
        pool = pool_from(images, labels)
        matrix = build_distance_matrix(pool, images, labels, workers=1)
        trainer = AdaBoostTrainer(matrix, pool, workers=1)
        bound = 1.0
        for _ in range(6):
            record = trainer.step()
            if record is None:
                break
            assert 2 * record.eps < Q32_ONE
            assert record.alpha > 0
            assert record.eps_effective >= record.eps

            weights = trainer.state.weights
            assert abs(int(weights.sum()) - Q32_ONE) <= len(weights)
            if not record.clamped:
                accepted = matrix.entries[record.keypoint_id] < record.threshold
                wrong = accepted != matrix.labels.astype(bool)
                assert abs(int(weights[wrong].sum()) / Q32_ONE - 0.5) <= 2 ** -10

            e = record.eps_effective / Q32_ONE
            bound *= 2 * math.sqrt(e * (1 - e))
            assert float(record.train_error) <= bound + 1e-6


def test_training_is_deterministic(toy_problem):
    matrix, pool, _, _ = toy_problem
    first, _ = adaboost_train(matrix, pool, 5, workers=1)
    second, _ = adaboost_train(matrix, pool, 5, workers=3)
    assert format_model(first) == format_model(second)


def test_separable_problem_in_one_round():
    matrix, pool, images, labels = separable_problem()
    sc, state = adaboost_train(matrix, pool, 1)
    assert len(sc) == 1
    record = state.round_log[0]
    assert record.train_error == 0
    assert record.clamped
    assert record.eps == 0
    assert sc.rounds[0].alpha == half_log_odds_q16(4 * len(images) - 1, 1)
    for descriptors, label in zip(images, labels):
        assert classify(sc, descriptors) == bool(label)
    assert vote_trace(sc, images[0]) == [Q16_ONE]


def test_test_error_is_tracked():
    matrix, pool, images, labels = separable_problem()
    trainer = AdaBoostTrainer(matrix, pool, test_matrix=matrix)
    record = trainer.step()
    assert record.test_error == record.train_error == 0


# ==================== Inference ====================

def test_strong_output_weighting():
    a, b, c = unit(0), unit(1), unit(2)
    sc = StrongClassifier(rounds=(
        weak(a, alpha=2 * Q16_ONE),
        weak(b, alpha=Q16_ONE),
        weak(c, alpha=Q16_ONE),
    ))
    image = np.stack([a, c])
    assert weak_votes(sc, image).tolist() == [1, 0, 1]
    assert strong_output(sc, image) == 49152
    assert vote_trace(sc, image) == [65536, 43690, 49152]
    assert classify(sc, image)
    assert strong_output(sc, np.zeros((0, 64))) == 0


def test_decision_threshold_is_inclusive():
    assert is_positive(DECISION_HALF)
    assert not is_positive(DECISION_HALF - 1)
    assert is_positive(40000, decision=40000)


def test_trace_ends_at_full_output(toy_problem):
    matrix, pool, images, _ = toy_problem
    sc, _ = adaboost_train(matrix, pool, 4)
    for descriptors in images:
        trace = vote_trace(sc, descriptors)
        assert len(trace) == len(sc)
        assert trace[-1] == strong_output(sc, descriptors)
        assert trace[0] in (0, Q16_ONE)
        for k in range(1, len(sc) + 1):
            assert trace[k - 1] == strong_output(sc.prefix(k), descriptors)


def test_evaluate_weak_agrees_with_matrix(toy_problem):
    matrix, pool, images, _ = toy_problem
    for i, record in enumerate(pool[:5]):
        for t in threshold_candidates(matrix.entries[i]):
            w = weak(record.descriptor, threshold=t)
            for j, descriptors in enumerate(images):
                assert evaluate_weak(w, descriptors) == int(matrix.entries[i, j] < t)


def test_empty_image_never_fires():
    w = weak(unit(0), threshold=8193)
    assert evaluate_weak(w, np.zeros((0, 64))) == 0
    assert evaluate_weak(w, unit(0, -1)[None, :]) == 1


def test_separable_toy_errors():
    distances = [1, 2, 8, 9]
    labels = [1, 1, 0, 0]
    weights = [Q32_ONE // 4] * 4
    errors = dict(weighted_errors_for_row(distances, weights, labels, [2, 6]))
    assert errors[6] == 0
    assert errors[2] == Q32_ONE // 4


def test_selection_tie_prefers_lower_row():
    entries = np.array([[3, 0, 9, 9], [0, 3, 9, 9], [0, 9, 0, 9]], dtype=np.int32)
    matrix = DistanceMatrix(entries=entries, labels=np.array([1, 1, 0, 0], dtype=np.uint8))
    best = select_best(matrix, TrainingState.uniform(matrix.labels))
    assert (best.error, best.row, best.threshold) == (0, 0, 6)


def test_unique_perfect_split_is_found():
    entries = np.array([[0, 5, 5, 5], [0, 9, 2, 9]], dtype=np.int32)
    matrix = DistanceMatrix(entries=entries, labels=np.array([1, 0, 1, 0], dtype=np.uint8))
    best = select_best(matrix, TrainingState.uniform(matrix.labels))
    assert (best.error, best.row, best.threshold) == (0, 1, 5)


def test_strict_threshold_boundary():
    near = unit(0).copy()
    near[1] = 1
    w = weak(unit(0), threshold=1)
    assert evaluate_weak(w, near[None, :]) == 0
    assert evaluate_weak(w, unit(0)[None, :]) == 1


def test_unanimous_votes():
    sc = StrongClassifier(rounds=(weak(unit(0), alpha=5000), weak(unit(0), alpha=70000)))
    assert strong_output(sc, unit(0)[None, :]) == Q16_ONE
    assert strong_output(sc, unit(3)[None, :]) == 0

# -*- coding: utf-8 -*-
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from kpboost.boosting.adaboost import (
    DECISION_HALF,
    StrongClassifier,
    WeakClassifier,
    classify,
    evaluate_weak,
    vote_trace,
)
from kpboost.evaluation.analysis import (
    heatmap_concentration,
    keypoint_heatmap,
    response_matrix,
    responding_keypoints,
    save_heatmap,
)
from kpboost.evaluation.curves import (
    best_balanced_point,
    error_curves,
    misclassification_rate,
    pr_area,
    pr_curve,
    pr_point,
)
from kpboost.evaluation.dataset import (
    TEST,
    TRAIN,
    DatasetEntry,
    DatasetManifest,
    check_split,
    load_manifest,
    save_manifest,
    split_dataset,
)
from kpboost.evaluation.sequence import filter_sequence
from kpboost.exceptions import ConfigurationError, DatasetError
from kpboost.features.detector import Keypoint
from kpboost.features.extraction import ImageFeatures, extract_features
from synthetic import config_for, render_discs, write_png


def unit(index, sign=1):
    d = np.zeros(64, dtype=np.int32)
    d[index] = sign * 4096
    return d


def manifest_of(n_pos, n_neg):
    entries = [DatasetEntry(path=Path(f"img{i:04d}.png"), label=1) for i in range(n_pos)]
    entries += [DatasetEntry(path=Path(f"img{n_pos + i:04d}.png"), label=0) for i in range(n_neg)]
    return DatasetManifest(entries=entries)


def single_feature_model(descriptor, threshold=1):
    w = WeakClassifier(descriptor=descriptor, threshold=threshold, alpha=65536, keypoint_id=0, source_image=0)
    return StrongClassifier(rounds=(w,))


# ==================== Dataset ====================

def test_split_sizes_and_determinism():
    manifest = manifest_of(550, 500)
    split = split_dataset(manifest, seed=2009, train_fraction_pos=0.64, train_fraction_neg=0.644)
    assert split.class_counts(TRAIN) == {"positive": 352, "negative": 322}
    assert split.class_counts(TEST) == {"positive": 198, "negative": 178}
    assert split.is_split
    assert split.seed == 2009

    again = split_dataset(manifest, seed=2009, train_fraction_pos=0.64, train_fraction_neg=0.644)
    assert [e.split for e in again.entries] == [e.split for e in split.entries]
    other = split_dataset(manifest, seed=7, train_fraction_pos=0.64, train_fraction_neg=0.644)
    assert [e.split for e in other.entries] != [e.split for e in split.entries]


def test_split_needs_both_classes():
    with pytest.raises(DatasetError, match="negative"):
        split_dataset(manifest_of(5, 0), seed=1, train_fraction_pos=0.5)


def test_split_needs_both_sides():
    with pytest.raises(DatasetError):
        split_dataset(manifest_of(2, 10), seed=1, train_fraction_pos=0.1, train_fraction_neg=0.5)


def test_split_at_two_thirds():
    split = split_dataset(manifest_of(9, 6), seed=11, train_fraction_pos=2 / 3)
    assert split.class_counts(TRAIN) == {"positive": 6, "negative": 4}
    assert split.class_counts(TEST) == {"positive": 3, "negative": 2}


def test_check_split():
    split = split_dataset(manifest_of(4, 4), seed=3, train_fraction_pos=0.5)
    check_split(split)
    lopsided = DatasetManifest(entries=[
        DatasetEntry(Path("a.png"), 1, TRAIN),
        DatasetEntry(Path("b.png"), 0, TRAIN),
        DatasetEntry(Path("c.png"), 1, TEST),
    ])
    with pytest.raises(DatasetError, match="test"):
        check_split(lopsided)


def test_manifest_loading(tmp_path):
    (tmp_path / "data").mkdir()
    manifest = tmp_path / "data" / "manifest.csv"
    manifest.write_text("path,label,split\ncars/a.png,1,train\n/abs/b.png,0,TEST\nc.png,0,\n")
    loaded = load_manifest(manifest)
    assert len(loaded) == 3
    assert loaded.entries[0].path == tmp_path / "data" / "cars" / "a.png"
    assert loaded.entries[1].path == Path("/abs/b.png")
    assert [e.split for e in loaded.entries] == [TRAIN, TEST, ""]
    assert [e.label for e in loaded.entries] == [1, 0, 0]
    assert not loaded.is_split


@pytest.mark.parametrize("body, message", [
    ("path,label\na.png,2\n", "label must be 0 or 1"),
    ("path,label\na.png,1\na.png,0\n", "duplicate"),
    ("path,label,split\na.png,1,validation\n", "split must be"),
    ("path,label\n", "no images"),
    ("image,label\na.png,1\n", ""),
])
def test_manifest_errors(tmp_path, body, message):
    path = tmp_path / "manifest.csv"
    path.write_text(body)
    with pytest.raises(DatasetError, match=message):
        load_manifest(path)


def test_missing_manifest(tmp_path):
    with pytest.raises(DatasetError, match="does not exist"):
        load_manifest(tmp_path / "none.csv")


def test_manifest_save_and_reload(tmp_path):
    split = split_dataset(manifest_of(3, 3), seed=11, train_fraction_pos=0.5)
    path = save_manifest(split, tmp_path / "split.csv")
    reloaded = load_manifest(path)
    assert reloaded.is_split
    assert [e.split for e in reloaded.entries] == [e.split for e in split.entries]


# ==================== Curves ====================

def test_misclassification_rate():
    outputs = np.array([65536, 40000, 32768, 100, 0])
    labels = np.array([1, 0, 1, 1, 0])
    assert misclassification_rate(outputs, labels) == Fraction(2, 5)


def test_error_curves():
    train = np.array([[65536, 0, 49152], [0, 0, 65536]])
    test = np.array([[0, 65536, 65536]])
    points = error_curves(train, [1, 0], test, [1])
    assert [p.round for p in points] == [1, 2, 3]
    assert [p.train_error for p in points] == [Fraction(0), Fraction(1, 2), Fraction(1, 2)]
    assert [p.test_error for p in points] == [Fraction(1), Fraction(0), Fraction(0)]
    assert points[0].as_row() == {"round": 1, "train_error": "0.000000", "test_error": "1.000000"}
    assert error_curves(train, [1, 0])[0].test_error is None


def test_last_round_matches_direct_classification():
    sc = StrongClassifier(rounds=(
        WeakClassifier(unit(0), 1, 30000, 0, 0),
        WeakClassifier(unit(1), 1, 20000, 1, 0),
        WeakClassifier(unit(2), 1, 25000, 2, 0),
    ))
    images = [
        np.stack([unit(0), unit(1)]),
        np.stack([unit(1), unit(2)]),
        np.stack([unit(2)]),
        np.stack([unit(0)]),
        np.zeros((0, 64), dtype=np.int32),
    ]
    labels = [1, 1, 0, 0, 0]
    traces = np.array([vote_trace(sc, d) for d in images])
    direct = [classify(sc, d) for d in images]
    assert direct == [True, True, False, False, False]
    expected = Fraction(sum(int(p) != l for p, l in zip(direct, labels)), len(labels))
    assert error_curves(traces, labels)[-1].train_error == expected == 0


def test_pr_point_example():
    outputs = [60000] * 19 + [50000] + [100] + [0] * 9
    labels = [1] * 19 + [0] + [1] + [0] * 9
    point = pr_point(outputs, labels, 32768)
    assert (point.tp, point.fp, point.fn, point.tn) == (19, 1, 1, 9)
    assert point.precision == Fraction(19, 20)
    assert point.recall == Fraction(19, 20)
    row = point.as_row()
    assert row["precision"] == "0.950000"
    assert row["threshold"] == "0.500000"


def test_undefined_precision_is_flagged():
    point = pr_point([10, 20], [1, 0], 70000)
    assert not point.precision_defined
    assert point.precision == 1
    assert point.recall == 0
    assert point.as_row()["precision_defined"] == 0


def test_perfect_classifier_curve():
    outputs = [65536, 65536, 0, 0, 0]
    labels = [1, 1, 0, 0, 0]
    points = pr_curve(outputs, labels)
    assert points[0].precision == 1
    assert points[0].recall == 1
    assert pr_area(points) == 1


def test_pr_curve_order_and_area():
    points = pr_curve([3, 2, 1], [1, 0, 1], decision=2)
    assert [p.threshold for p in points] == [3, 2, 1]
    recalls = [p.recall for p in points]
    assert recalls == sorted(recalls)
    assert [p.precision for p in points] == [Fraction(1), Fraction(1, 2), Fraction(2, 3)]
    assert pr_area(points) == Fraction(5, 6)
    assert best_balanced_point(points).threshold == 1


def test_pr_curve_includes_operating_point():
    outputs = [60000, 40000, 20000, 10000]
    labels = [1, 0, 1, 0]
    points = pr_curve(outputs, labels)
    assert [p.threshold for p in points] == [60000, 40000, DECISION_HALF, 20000, 10000]
    operating = points[2]
    assert (operating.tp, operating.fp, operating.fn, operating.tn) == (1, 1, 1, 1)
    assert misclassification_rate(outputs, labels) == Fraction(operating.fp + operating.fn, len(labels))

    custom = pr_curve(outputs, labels, decision=50000)
    assert 50000 in [p.threshold for p in custom]


def test_best_balanced_point_of_nothing():
    assert best_balanced_point([]) is None


# ==================== Analysis ====================

def fixed_features(keypoints, descriptors, size=64):
    return ImageFeatures(width=size, height=size, keypoints=keypoints,
                         descriptors=np.stack(descriptors) if descriptors else np.zeros((0, 64), dtype=np.int32))


def test_responding_keypoints():
    kps = [Keypoint(504, 504, 57, 9), Keypoint(200, 100, 40, 3)]
    features = fixed_features(kps, [unit(0), unit(1)])
    sc = StrongClassifier(rounds=(
        WeakClassifier(unit(1), 1, 100, 0, 0),
        WeakClassifier(unit(0), 1, 100, 1, 0),
        WeakClassifier(unit(0), 8193, 100, 2, 0),
    ))
    assert response_matrix(sc, features).tolist() == [[False, True, True], [True, False, True]]
    responding = responding_keypoints(sc, features)
    assert [r.features for r in responding] == [(1, 2), (0, 2)]
    assert responding[0].as_row()["features"] == "1 2"
    assert responding_keypoints(sc, fixed_features([], [])) == []


def test_heatmap_of_identical_images(tmp_path):
    kp = Keypoint(504, 504, 57, 9)
    images = [fixed_features([kp, Keypoint(100, 900, 40, 1)], [unit(0), unit(5)]) for _ in range(3)]
    sc = single_feature_model(unit(0))
    heatmap = keypoint_heatmap(sc, 0, images, ["a", "b", "c"])
    assert int(heatmap.grid[32, 32]) == 3
    assert int(heatmap.grid.sum()) == 3
    assert [h.image for h in heatmap.hits] == ["a", "b", "c"]
    assert heatmap_concentration(heatmap) == 1
    assert heatmap.render()[32, 32] == 255

    csv_path, image_path = save_heatmap(heatmap, tmp_path)
    assert csv_path.name == "heatmap_0.csv"
    assert image_path.exists()
    assert len(pd.read_csv(csv_path)) == 3


def test_heatmap_concentration_of_spread_hits():
    kps = [Keypoint(8, 8, 19, 1), Keypoint(1000, 1000, 19, 1)]
    images = [fixed_features(kps, [unit(0), unit(0)])]
    heatmap = keypoint_heatmap(single_feature_model(unit(0)), 0, images, ["a"])
    assert heatmap_concentration(heatmap) == Fraction(1, 2)


def test_heatmap_errors():
    sc = single_feature_model(unit(0))
    a = fixed_features([], [], size=64)
    b = fixed_features([], [], size=32)
    with pytest.raises(ConfigurationError):
        keypoint_heatmap(sc, 1, [a], ["a"])
    with pytest.raises(DatasetError):
        keypoint_heatmap(sc, 0, [a, b], ["a", "b"])
    with pytest.raises(DatasetError):
        keypoint_heatmap(sc, 0, [], [])


def test_never_firing_feature_gives_empty_heatmap(tmp_path):
    images = [fixed_features([Keypoint(504, 504, 57, 9)], [unit(0)]) for _ in range(2)]
    heatmap = keypoint_heatmap(single_feature_model(unit(7)), 0, images, ["a", "b"])
    assert int(heatmap.grid.sum()) == 0
    assert heatmap.hits == []
    assert not heatmap.render().any()
    assert heatmap_concentration(heatmap) == 0

    csv_path, _ = save_heatmap(heatmap, tmp_path)
    table = pd.read_csv(csv_path)
    assert list(table.columns) == ["image", "x", "y", "scale"]
    assert len(table) == 0


def test_responding_agrees_with_weak_evaluation():
    rng = np.random.default_rng(5)
    descriptors = [rng.integers(-300, 300, 64).astype(np.int32) for _ in range(6)]
    kps = [Keypoint(100 * i, 50, 40, i) for i in range(6)]
    features = fixed_features(kps, descriptors, size=128)
    sc = StrongClassifier(rounds=tuple(
        WeakClassifier(descriptors[i] + 3, threshold, 100, i, 0)
        for i, threshold in [(0, 200), (2, 150), (4, 100), (5, 1)]
    ))
    responding = responding_keypoints(sc, features)
    for t, w in enumerate(sc.rounds):
        hit = any(t in r.features for r in responding)
        assert hit == bool(evaluate_weak(w, features.descriptors))
        for r in responding:
            if t in r.features:
                k = kps.index(r.keypoint)
                assert evaluate_weak(w, descriptors[k][None, :]) == 1


# ==================== Sequence filtering ====================

def test_filter_sequence(tmp_path):
    blob = render_discs(64, 64, [(32.3, 31.8, 5.0)])
    cfg = config_for(blob)
    features = extract_features(blob, cfg)
    sc = single_feature_model(features.descriptors[0])

    frames = tmp_path / "frames"
    write_png(frames / "frame2.png", blob)
    write_png(frames / "frame10.png", render_discs(64, 64, []))
    (frames / "frame11.png").write_bytes(b"not an image")

    out = tmp_path / "out"
    results = filter_sequence(sc, frames, cfg, out, overlay=True)
    assert [r.frame.name for r in results] == ["frame2.png", "frame10.png"]
    assert len(results[0].responding) == 1
    assert results[1].keypoints == 0

    timing = pd.read_csv(out / "timing.csv")
    assert list(timing["frame"]) == ["frame2.png", "frame10.png"]
    assert len(pd.read_csv(out / "frame2.csv")) == 1
    assert len(pd.read_csv(out / "frame10.csv")) == 0
    assert (out / "frame2_overlay.png").exists()


def test_filter_empty_directory(tmp_path):
    sc = single_feature_model(unit(0))
    assert filter_sequence(sc, tmp_path, config_for(render_discs(64, 64, [(32.3, 31.8, 5.0)]))) == []

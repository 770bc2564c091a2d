# -*- coding: utf-8 -*-
import numpy as np
import pytest

from kpboost.boosting.adaboost import StrongClassifier, WeakClassifier, adaboost_train
from kpboost.boosting.model_io import format_model, load_model, parse_model, save_model
from kpboost.exceptions import ModelFormatError


def sample_classifier():
    rounds = []
    for t, alpha in enumerate((36000, 12345)):
        descriptor = np.zeros(64, dtype=np.int32)
        descriptor[t] = 4096 if t == 0 else -4096
        rounds.append(WeakClassifier(descriptor=descriptor, threshold=100 + t, alpha=alpha, keypoint_id=7 + t, source_image=3))
    return StrongClassifier(rounds=tuple(rounds), decision=32768)


def test_model_text_layout():
    text = format_model(sample_classifier())
    lines = text.splitlines()
    assert lines[0] == "kpboost-model v1 rounds=2 norm=4096 decision=32768/65536"
    assert lines[1].startswith("alpha=36000/65536 thr=100 src=3:7 4096 0 0")
    assert lines[2].startswith("alpha=12345/65536 thr=101 src=3:8 0 -4096 0")
    assert len(lines[1].split()) == 3 + 64
    assert text.endswith("\n")


def test_model_round_trip(tmp_path, toy_problem):
    matrix, pool, _, _ = toy_problem
    sc, _ = adaboost_train(matrix, pool, 3)
    path = save_model(sc, tmp_path / "model.txt")
    loaded = load_model(path)
    assert format_model(loaded) == format_model(sc)
    assert [w.alpha for w in loaded.rounds] == [w.alpha for w in sc.rounds]
    for a, b in zip(loaded.rounds, sc.rounds):
        assert np.array_equal(a.descriptor, b.descriptor)


def test_blank_lines_are_ignored():
    text = format_model(sample_classifier()).replace("\n", "\n\n")
    assert len(parse_model(text)) == 2


@pytest.mark.parametrize("mutate, message", [
    (lambda lines: ["kpboost-model v2" + lines[0][16:]] + lines[1:], "header"),
    (lambda lines: [lines[0].replace("norm=4096", "norm=1000")] + lines[1:], "normalized"),
    (lambda lines: [lines[0].replace("rounds=2", "rounds=3")] + lines[1:], "announces"),
    (lambda lines: [lines[0], lines[1].replace("alpha=36000", "alpha=0"), lines[2]], "positive"),
    (lambda lines: [lines[0], lines[1].rsplit(" ", 1)[0], lines[2]], "descriptor values"),
    (lambda lines: [lines[0], lines[1].replace("thr=", "threshold="), lines[2]], "malformed"),
    (lambda lines: [lines[0], lines[1] + "x", lines[2]], "line 2"),
])
def test_parse_errors(mutate, message):
    lines = format_model(sample_classifier()).splitlines()
    with pytest.raises(ModelFormatError, match=message):
        parse_model("\n".join(mutate(lines)))


def test_empty_model_text():
    with pytest.raises(ModelFormatError):
        parse_model("\n\n")


def test_missing_and_roundless_models(tmp_path):
    with pytest.raises(ModelFormatError, match="does not exist"):
        load_model(tmp_path / "absent.txt")
    path = tmp_path / "empty.txt"
    path.write_text("kpboost-model v1 rounds=0 norm=4096 decision=32768/65536\n")
    with pytest.raises(ModelFormatError, match="no rounds"):
        load_model(path)

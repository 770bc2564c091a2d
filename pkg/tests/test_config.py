# -*- coding: utf-8 -*-
import pytest

from kpboost.config.run_config import (
    DEFAULT_STRIDES,
    DetectorConfig,
    RunConfig,
    TrainingConfig,
    dump_run_config,
    load_run_config,
    parse_int_list,
)
from kpboost.config.settings import AppSettings
from kpboost.exceptions import ConfigurationError
from kpboost.utils.parallel import chunk_ranges, ordered_map, worker_count


def test_builtin_defaults():
    config = load_run_config()
    assert isinstance(config, RunConfig)
    assert config.detector.strides == DEFAULT_STRIDES
    assert config.training.rounds == 300
    assert config.training.decision == 32768
    assert config.paths.manifest is None


def test_shipped_config_matches_defaults():
    assert load_run_config(AppSettings.DEFAULT_CONFIG_FILE) == load_run_config()


def test_file_and_overrides(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# comment line\n"
        "detector.hessian_threshold=5000  # trailing comment\n"
        "training.rounds=20\n"
        "paths.manifest=data/manifest.csv\n"
    )
    config = load_run_config(path, {"training.rounds": 7, "training.seed": None, "paths.out": "elsewhere"})
    assert config.detector.hessian_threshold == 5000
    assert config.training.rounds == 7
    assert config.training.seed == 2009
    assert config.paths.manifest == "data/manifest.csv"
    assert config.paths.out == "elsewhere"


def test_path_overrides_stay_strings():
    config = load_run_config(None, {"paths.out": "2009", "paths.cache": "cache: dir"})
    assert config.paths.out == "2009"
    assert config.paths.cache == "cache: dir"


@pytest.mark.parametrize("line", [
    "training.rounds=0",
    "training.rounds=many",
    "training.train_fraction_pos=1.5",
    "training.decision=70000",
    "detector.scale_count=2",
    "detector.max_keypoints=0",
    "detector.strides=[1,0]",
    "detector.bogus=1",
    "no equals sign here",
])
def test_invalid_files(tmp_path, line):
    path = tmp_path / "bad.conf"
    path.write_text(line + "\n")
    with pytest.raises(ConfigurationError):
        load_run_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="does not exist"):
        load_run_config(tmp_path / "missing.conf")


def test_dump_round_trip(tmp_path):
    config = load_run_config(None, {"training.rounds": 12, "paths.manifest": "m.csv"})
    text = dump_run_config(config)
    assert "detector.strides=[1,1,2,2,4,4,4,4]\n" in text
    assert "training.rounds=12\n" in text
    assert "paths.model=\n" in text
    path = tmp_path / "run.conf"
    path.write_text(text)
    assert load_run_config(path) == config


def test_direct_validation():
    with pytest.raises(ConfigurationError):
        TrainingConfig(rounds=-1)
    assert DetectorConfig(strides=[2, 4]).stride_for(5) == 4


def test_parse_int_list():
    assert parse_int_list("10, 50,100") == [10, 50, 100]
    with pytest.raises(ConfigurationError):
        parse_int_list("10,x")


def test_worker_cap(monkeypatch):
    monkeypatch.setenv(AppSettings.THREADS_ENV, "2")
    assert worker_count() == 2
    assert worker_count(8) == 2
    assert worker_count(1) == 1
    monkeypatch.setenv(AppSettings.THREADS_ENV, "junk")
    assert worker_count(3) >= 1


def test_ordered_map_keeps_order():
    assert ordered_map(lambda x: x * x, range(20), workers=4) == [x * x for x in range(20)]
    assert [list(r) for r in chunk_ranges(5, 2)] == [[0, 1], [2, 3], [4]]
    assert chunk_ranges(0, 3) == []

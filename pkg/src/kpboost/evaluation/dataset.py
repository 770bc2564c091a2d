# -*- coding: utf-8 -*-
"""
Dataset manifests and stratified train/test splits

A manifest is a CSV with columns `path,label[,split]`; relative paths are
resolved against the manifest's directory.
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ..exceptions import DatasetError
from ..utils.io_utils import read_csv, write_csv

logger = logging.getLogger(__name__)

TRAIN = "train"
TEST = "test"
MANIFEST_COLUMNS = ["path", "label", "split"]


@dataclass(frozen=True)
class DatasetEntry:
    path: Path
    label: int
    split: str = ""


@dataclass
class DatasetManifest:
    """Labeled images with optional split flags and the seed that produced them"""

    entries: List[DatasetEntry] = field(default_factory=list)
    seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_split(self) -> bool:
        return bool(self.entries) and all(e.split in (TRAIN, TEST) for e in self.entries)

    def subset(self, split: str) -> List[DatasetEntry]:
        return [e for e in self.entries if e.split == split]

    @property
    def train(self) -> List[DatasetEntry]:
        return self.subset(TRAIN)

    @property
    def test(self) -> List[DatasetEntry]:
        return self.subset(TEST)

    def class_counts(self, split: Optional[str] = None) -> dict:
        entries = self.entries if split is None else self.subset(split)
        positives = sum(e.label for e in entries)
        return {"positive": positives, "negative": len(entries) - positives}


def load_manifest(path: Union[str, Path]) -> DatasetManifest:
    """Read and validate a manifest CSV"""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"Manifest does not exist: {path}")
    try:
        frame = read_csv(path, required=["path", "label"])
    except KeyError as e:
        raise DatasetError(str(e)) from e

    base = path.parent
    entries = []
    seen = set()
    for number, row in enumerate(frame.to_dict("records"), start=2):
        raw_path = str(row["path"]).strip()
        if not raw_path:
            raise DatasetError(f"{path}:{number}: empty image path")
        label_text = str(row["label"]).strip()
        if label_text not in ("0", "1"):
            raise DatasetError(f"{path}:{number}: label must be 0 or 1, got {label_text!r}")
        split = str(row.get("split", "") or "").strip().lower()
        if split not in ("", TRAIN, TEST):
            raise DatasetError(f"{path}:{number}: split must be train or test, got {split!r}")

        image_path = Path(raw_path)
        if not image_path.is_absolute():
            image_path = base / image_path
        if image_path in seen:
            raise DatasetError(f"{path}:{number}: duplicate image path {raw_path}")
        seen.add(image_path)
        entries.append(DatasetEntry(path=image_path, label=int(label_text), split=split))

    if not entries:
        raise DatasetError(f"Manifest {path} lists no images")
    logger.info("Loaded manifest %s: %d images (%s)", path.name, len(entries), DatasetManifest(entries).class_counts())
    return DatasetManifest(entries=entries)


def save_manifest(manifest: DatasetManifest, path: Union[str, Path]) -> Path:
    rows = [{"path": str(e.path), "label": e.label, "split": e.split} for e in manifest.entries]
    return write_csv(rows, MANIFEST_COLUMNS, path)


def train_count(total: int, fraction: float) -> int:
    return int(round(fraction * total))


def split_dataset(
    manifest: DatasetManifest,
    seed: int,
    train_fraction_pos: float,
    train_fraction_neg: Optional[float] = None,
) -> DatasetManifest:
    """Stratified random split, one fraction per class, deterministic for a seed"""
    if train_fraction_neg is None:
        train_fraction_neg = train_fraction_pos

    rng = np.random.default_rng(seed)
    splits = [TEST] * len(manifest.entries)
    for label, fraction in ((1, train_fraction_pos), (0, train_fraction_neg)):
        members = [i for i, e in enumerate(manifest.entries) if e.label == label]
        name = "positive" if label else "negative"
        if not members:
            raise DatasetError(f"No {name} images in the manifest")
        count = train_count(len(members), fraction)
        if not 0 < count < len(members):
            raise DatasetError(
                f"Cannot split {len(members)} {name} images at fraction {fraction}: "
                "both train and test need at least one"
            )
        for i in rng.permutation(members)[:count]:
            splits[int(i)] = TRAIN

    result = DatasetManifest(
        entries=[replace(e, split=s) for e, s in zip(manifest.entries, splits)],
        seed=seed,
    )
    logger.info(
        "Split with seed %d: train %s, test %s",
        seed, result.class_counts(TRAIN), result.class_counts(TEST),
    )
    return result


def check_split(manifest: DatasetManifest) -> None:
    """Both splits must hold at least one positive and one negative image"""
    for split in (TRAIN, TEST):
        counts = manifest.class_counts(split)
        if counts["positive"] == 0 or counts["negative"] == 0:
            raise DatasetError(f"The {split} split needs positive and negative images (got {counts})")

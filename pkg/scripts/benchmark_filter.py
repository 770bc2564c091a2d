#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Sequence filtering benchmark
Measures per-frame detect + filter time on a frame directory or synthetic frames
"""

import argparse
import sys
from pathlib import Path

import cv2
import numpy as np

# Add project path
project_root = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(project_root))

from kpboost import get_system_info  # noqa: E402
from kpboost.boosting.model_io import load_model  # noqa: E402
from kpboost.config.run_config import load_run_config  # noqa: E402
from kpboost.evaluation.analysis import responding_keypoints  # noqa: E402
from kpboost.features.extraction import extract_features  # noqa: E402
from kpboost.imaging.image import GrayImage, load_image  # noqa: E402
from kpboost.utils.io_utils import list_frames  # noqa: E402


def synthetic_frames(count, width=320, height=240, seed=0):
    """Smoothed noise frames with some texture at every scale"""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        noise = rng.integers(0, 256, size=(height, width)).astype(np.uint8)
        yield GrayImage(cv2.GaussianBlur(noise, (0, 0), 2.5))


def benchmark(frames, config, model=None):
    """Time detection (and filtering when a model is given) on each frame"""
    times = []
    kept = 0
    for img in frames:
        start = cv2.getTickCount()
        features = extract_features(img, config.detector)
        if model is not None:
            kept += len(responding_keypoints(model, features))
        times.append((cv2.getTickCount() - start) * 1000.0 / cv2.getTickFrequency())
    return np.array(times), kept


def main():
    parser = argparse.ArgumentParser(description="kpboost sequence filtering benchmark")
    parser.add_argument("--frames", type=Path, help="directory of numbered frames (default: synthetic 320x240)")
    parser.add_argument("--count", type=int, default=50, help="synthetic frame count")
    parser.add_argument("--model", type=Path, help="model file; without one only detection is timed")
    parser.add_argument("--config", type=Path, help="flat key=value configuration file")
    parser.add_argument("--budget-ms", type=float, default=50.0, help="mean per-frame budget")

    args = parser.parse_args()

    print("=" * 50)
    print("kpboost filtering benchmark")
    for key, value in get_system_info().items():
        print(f"{key}: {value}")
    print("-" * 50)

    config = load_run_config(args.config)
    model = load_model(args.model) if args.model else None
    if model is None:
        print("⚠️ No model given, timing detection and description only")

    if args.frames:
        frames = [load_image(p) for p in list_frames(args.frames)]
        if not frames:
            print(f"❌ No frames found in {args.frames}")
            return 1
    else:
        frames = list(synthetic_frames(args.count))

    times, kept = benchmark(frames, config, model)

    print(f"\n📊 Statistics:")
    print(f"Frames: {len(times)}")
    print(f"Mean: {times.mean():.2f} ms")
    print(f"Median: {np.median(times):.2f} ms")
    print(f"Max: {times.max():.2f} ms")
    if model is not None:
        print(f"Responding keypoints: {kept}")

    if times.mean() <= args.budget_ms:
        print(f"✅ Within the {args.budget_ms:.0f} ms budget")
        return 0
    print(f"⚠️ Above the {args.budget_ms:.0f} ms budget")
    return 1


if __name__ == "__main__":
    sys.exit(main())

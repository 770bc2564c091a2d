#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
kpboost Main Program
Command-line entry point: keypoints, training, evaluation, analysis and sequence filtering
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from . import get_version
from .boosting.fixedpoint import Q16_ONE
from .config.run_config import RunConfig, load_run_config, parse_int_list
from .config.settings import AppSettings
from .core.pipeline import KeypointBoostSystem
from .exceptions import KpBoostError
from .features.extraction import KEYPOINT_COLUMNS, extract_file, keypoint_rows
from .utils.logging_utils import setup_logging

logger = logging.getLogger("kpboost")

# flag destination -> dotted configuration key
OVERRIDES = {
    "seed": "training.seed",
    "rounds": "training.rounds",
    "manifest": "paths.manifest",
    "model": "paths.model",
    "out": "paths.out",
    "cache": "paths.cache",
    "max_keypoints": "detector.max_keypoints",
    "hessian_threshold": "detector.hessian_threshold",
}


def common_options() -> argparse.ArgumentParser:
    """Options shared by every subcommand"""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("configuration")
    group.add_argument("--config", type=Path, help="flat key=value configuration file (default: config/kpboost.conf)")
    group.add_argument("--seed", type=int, help="dataset split seed")
    group.add_argument("--rounds", type=int, help="boosting rounds T")
    group.add_argument("--manifest", help="dataset manifest CSV (path,label[,split])")
    group.add_argument("--model", help="model file (default: <out>/model.txt)")
    group.add_argument("--out", help="output directory")
    group.add_argument("--cache", help="distance-matrix cache directory")
    group.add_argument("--max-keypoints", type=int, help="keypoints kept per image")
    group.add_argument("--hessian-threshold", type=int, help="detector response threshold")
    group.add_argument("--log-level", default=AppSettings.LOG_LEVEL,
                       choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="log verbosity")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = common_options()
    parser = argparse.ArgumentParser(
        prog="kpboost",
        description="Boosted keypoint-presence classification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_version()}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("keypoints", parents=[common], help="list keypoints and descriptors of an image")
    p.add_argument("image", type=Path, help="PGM or PNG image")
    p.add_argument("--csv", type=Path, help="write the listing to this file instead of stdout")

    sub.add_parser("train", parents=[common], help="train a model on a manifest")
    sub.add_parser("eval", parents=[common], help="error curves and PR curve of a model")

    p = sub.add_parser("pr-curve", parents=[common], help="PR curves of model prefixes")
    p.add_argument("--prefixes", type=parse_int_list, help="comma separated round counts, e.g. 10,50,100")

    p = sub.add_parser("heatmap", parents=[common], help="position heatmap of one model feature")
    p.add_argument("--feature", type=int, required=True, help="feature (round) index, 0-based")

    p = sub.add_parser("filter-seq", parents=[common], help="keep responding keypoints on a frame sequence")
    p.add_argument("frames", type=Path, help="directory of numbered frames")
    p.add_argument("--overlay", action="store_true", help="write side-by-side overlays")

    p = sub.add_parser("votes", parents=[common], help="per-round strong output of one image")
    p.add_argument("image", type=Path)

    p = sub.add_parser("responding", parents=[common], help="responding keypoints of one image")
    p.add_argument("image", type=Path)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file (or the default one) merged with command-line overrides"""
    config_file = args.config
    if config_file is None and AppSettings.DEFAULT_CONFIG_FILE.exists():
        config_file = AppSettings.DEFAULT_CONFIG_FILE
    overrides: Dict[str, object] = {key: getattr(args, dest) for dest, key in OVERRIDES.items()}
    return load_run_config(config_file, overrides)


# ==================== Commands ====================

def cmd_keypoints(args, config: RunConfig) -> int:
    features = extract_file(args.image, config.detector)
    frame = pd.DataFrame(keypoint_rows(features), columns=KEYPOINT_COLUMNS + ["descriptor"])
    if args.csv:
        args.csv.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(args.csv, index=False)
        print(f"✅ {len(frame)} keypoints written to {args.csv}")
    else:
        frame.to_csv(sys.stdout, index=False)
    return 0


def cmd_train(args, config: RunConfig) -> int:
    result = KeypointBoostSystem(config).train()
    final = result.state.round_log[-1]
    print(f"✅ Model with {len(result.model)} rounds saved to {result.model_path}")
    print(f"Pool: {result.pool_size} keypoints, final training error {float(final.train_error):.4f}")
    return 0


def cmd_eval(args, config: RunConfig) -> int:
    result = KeypointBoostSystem(config).evaluate()
    print(f"✅ Error curve ({len(result.curve)} rounds) and PR curve ({len(result.pr_points)} points) in {result.out_dir}")
    return 0


def cmd_pr_curve(args, config: RunConfig) -> int:
    curves = KeypointBoostSystem(config).pr_curves(args.prefixes)
    if not curves:
        print("⚠️ No valid prefix; nothing written")
        return 0
    for rounds, (_, area) in curves.items():
        print(f"{rounds:>5} rounds: PR area {float(area):.4f}")
    return 0


def cmd_heatmap(args, config: RunConfig) -> int:
    heatmap, concentration = KeypointBoostSystem(config).heatmap(args.feature)
    print(f"✅ Feature {args.feature}: {len(heatmap.hits)} hits, {100 * float(concentration):.1f}% in densest quarter window")
    return 0


def cmd_filter_seq(args, config: RunConfig) -> int:
    results = KeypointBoostSystem(config).filter_sequence(args.frames, overlay=args.overlay)
    kept = sum(len(r.responding) for r in results)
    print(f"✅ {len(results)} frames filtered, {kept} responding keypoints")
    return 0


def cmd_votes(args, config: RunConfig) -> int:
    trace = KeypointBoostSystem(config).votes(args.image)
    print(f"✅ {len(trace)} rounds, final output {trace[-1] / Q16_ONE:.4f}")
    return 0


def cmd_responding(args, config: RunConfig) -> int:
    result = KeypointBoostSystem(config).responding(args.image)
    print(f"✅ {len(result)} responding keypoints")
    return 0


COMMANDS = {
    "keypoints": cmd_keypoints,
    "train": cmd_train,
    "eval": cmd_eval,
    "pr-curve": cmd_pr_curve,
    "heatmap": cmd_heatmap,
    "filter-seq": cmd_filter_seq,
    "votes": cmd_votes,
    "responding": cmd_responding,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](args, config)
    except KeyboardInterrupt:
        print("\n⚠️ User interrupt, exiting...", file=sys.stderr)
        return 130
    except (KpBoostError, OSError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

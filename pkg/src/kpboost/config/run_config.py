# -*- coding: utf-8 -*-
"""
Run configuration module
Dataclass configuration tree for detection, training and paths,
loaded from flat key=value files with command-line overrides
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException

from ..exceptions import ConfigurationError

# Default stride ladder: 1 for the two finest levels, 2 for the next two, 4 beyond
DEFAULT_STRIDES = [1, 1, 2, 2, 4, 4, 4, 4]


@dataclass
class DetectorConfig:
    """Keypoint detector configuration"""

    scale_count: int = 8
    hessian_threshold: int = 1_000_000
    strides: List[int] = field(default_factory=lambda: list(DEFAULT_STRIDES))
    max_keypoints: int = 64

    def __post_init__(self):
        if self.scale_count < 3:
            raise ConfigurationError(f"`scale_count` must be >= 3 (got {self.scale_count})")
        if self.hessian_threshold < 0:
            raise ConfigurationError(f"`hessian_threshold` must be >= 0 (got {self.hessian_threshold})")
        if self.max_keypoints < 1:
            raise ConfigurationError(f"`max_keypoints` must be >= 1 (got {self.max_keypoints})")
        if not self.strides or any(int(s) < 1 for s in self.strides):
            raise ConfigurationError(f"`strides` must be a non-empty list of positive integers (got {self.strides})")
        self.strides = [int(s) for s in self.strides]

    def stride_for(self, level_index: int) -> int:
        """Sampling stride of a scale level; the last configured stride repeats"""
        return self.strides[min(level_index, len(self.strides) - 1)]


@dataclass
class TrainingConfig:
    """Boosting and dataset-split configuration"""

    rounds: int = 300
    seed: int = 2009
    train_fraction_pos: float = 0.64
    train_fraction_neg: float = 0.644
    # Q16 fraction of the total alpha mass
    decision: int = 32768

    def __post_init__(self):
        if self.rounds < 1:
            raise ConfigurationError(f"`rounds` must be >= 1 (got {self.rounds})")
        for name in ("train_fraction_pos", "train_fraction_neg"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigurationError(f"`{name}` must be in (0, 1) (got {value})")
        if not 0 < self.decision <= 65536:
            raise ConfigurationError(f"`decision` must be in (0, 65536] (got {self.decision})")


@dataclass
class PathsConfig:
    """Input and output locations"""

    manifest: Optional[str] = None
    model: Optional[str] = None
    out: Optional[str] = "runs"
    cache: Optional[str] = None


@dataclass
class RunConfig:
    """Complete run configuration"""

    detector: DetectorConfig = field(default_factory=DetectorConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)


def _read_flat_lines(config_file: Path) -> List[str]:
    """Read `section.key=value` lines, dropping blanks and comments"""
    lines = []
    for number, raw in enumerate(config_file.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{config_file}:{number}: expected key=value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        lines.append(f"{key.strip()}={value.strip()}")
    return lines


def load_run_config(
    config_file: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, object]] = None,
) -> RunConfig:
    """Load a run configuration

    Args:
        config_file: flat key=value file; None uses the built-in defaults only
        overrides: dotted keys mapped to values, applied last (flags win)

    Returns:
        RunConfig: validated configuration
    """
    schema = OmegaConf.structured(RunConfig)
    layers = [schema]
    if config_file is not None:
        config_file = Path(config_file)
        if not config_file.exists():
            raise ConfigurationError(f"Configuration file does not exist: {config_file}")
        layers.append(OmegaConf.from_dotlist(_read_flat_lines(config_file)))
    if overrides:
        nested: Dict[str, Dict[str, object]] = {}
        for key, value in overrides.items():
            if value is None:
                continue
            section, name = key.split(".", 1)
            nested.setdefault(section, {})[name] = value
        layers.append(OmegaConf.create(nested))

    try:
        merged = OmegaConf.merge(*layers)
        config = OmegaConf.to_object(merged)
    except ConfigurationError:
        raise
    except (OmegaConfBaseException, ValueError) as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e
    return config


def _format_value(value: object) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(str(v) for v in value) + "]"
    return str(value)


def dump_run_config(config: RunConfig) -> str:
    """Render a configuration back to the flat key=value format"""
    lines = ["# kpboost effective run configuration"]
    for section, values in asdict(config).items():
        for key, value in values.items():
            if value is None:
                value = ""
            lines.append(f"{section}.{key}={_format_value(value)}")
    return "\n".join(lines) + "\n"


def parse_int_list(text: str) -> Sequence[int]:
    """Parse a comma separated list such as `10,50,100`"""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigurationError(f"Expected a comma separated list of integers, got {text!r}") from e

"""Experiment configuration and deterministic JSON/CSV report writing."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bases import ALL_KINDS

DEFAULT_FAMILIES = (
    "RotatingNullGeodesics",
    "ParallelNullLines",
    "TimelikeHyperbolae",
    "RotatingTimelikeLines",
)


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


@dataclass
class ExperimentConfig:
    seed: int = 42
    dimension: int = 3
    tau_rel: float = 1e-9
    eps0: float = 0.5
    steps: int = 3
    n_max: int = 256
    tail_fraction: float = 0.9
    samples: int = 10_000
    partitions: int = 10
    transforms: int = 100
    kernel_trials: int = 1000
    kernel_max_n: int = 6
    lct_points: int = 16
    defns: list = field(default_factory=lambda: ["D1", "D2"])
    topologies: list = field(default_factory=lambda: [k.value for k in ALL_KINDS])
    families: list = field(default_factory=lambda: list(DEFAULT_FAMILIES))
    suites: list = field(default_factory=list)  # empty means all
    out_dir: str = "out"
    jobs: int = 1

    def validate(self) -> "ExperimentConfig":
        if self.dimension not in (1, 2, 3):
            raise ConfigError("dimension must be 1, 2 or 3")
        if not self.tau_rel > 0:
            raise ConfigError("tau_rel must be positive")
        if not self.eps0 > 0 or self.steps < 1:
            raise ConfigError("schedule needs eps0 > 0 and steps >= 1")
        if self.n_max < 16:
            raise ConfigError("n_max must be at least 16")
        if not 0 < self.tail_fraction <= 1:
            raise ConfigError("tail_fraction must be in (0, 1]")
        if not 1 <= self.kernel_max_n <= 12:
            raise ConfigError("kernel_max_n must be in 1..12")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        for d in self.defns:
            if d not in ("D1", "D2"):
                raise ConfigError(f"unknown limit-curve definition {d!r}")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data).validate()

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


# Where and how fast a run executes does not change its results.
RUNTIME_FIELDS = ("out_dir", "jobs")


def header(cfg: ExperimentConfig, command: str) -> dict:
    """Everything needed to reproduce a report: every experiment field, versions and seed."""
    config = {k: v for k, v in cfg.to_dict().items() if k not in RUNTIME_FIELDS}
    return {
        "command": command,
        "config": config,
        "seed": cfg.seed,
        "versions": {
            "causaltop": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
    }


def write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_csv(path: Path, rows: list, columns: list | None = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    path.write_text(buf.getvalue(), encoding="utf-8")

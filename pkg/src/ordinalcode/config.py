"""Experiment configuration: a flat ``key = value`` file plus flag overrides."""
from __future__ import annotations

import hashlib
import zlib
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .stdp import kernel_name

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    n: int = 6
    k: int = 256
    theta: float = 1 - 1e-9
    kernel: str = "constant"
    epsilons: tuple = (0.0, 0.01, 0.1)
    trials: int = 6
    episodes: int = 2
    input: Optional[str] = None
    output: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kernel", kernel_name(self.kernel))
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.n <= 64:
            raise ValueError("n must lie in 1..64")
        if self.k < 1:
            raise ValueError("k must be positive")
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        if any(e < 0 for e in self.epsilons):
            raise ValueError("epsilons must be nonnegative")
        if self.trials < 1 or self.episodes < 1:
            raise ValueError("trials and episodes must be positive")

    def dumps(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ",".join(repr(v) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        raw = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
        return cls().with_overrides(**raw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    def with_overrides(self, **values) -> "ExperimentConfig":
        """Return a copy with string or typed values applied; ``None`` is ignored."""
        types = {f.name: f.type for f in fields(self)}
        parsed = {}
        for key, value in values.items():
            if value is None:
                continue
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            parsed[key] = _coerce(key, value)
        return replace(self, **parsed)

    def hash(self) -> str:
        """Digest of everything that can change results (the output path cannot)."""
        return hashlib.sha256(replace(self, output=None).dumps().encode()).hexdigest()[:16]


def _coerce(key: str, value):
    if not isinstance(value, str):
        return tuple(value) if key == "epsilons" else value
    if key in ("seed", "n", "k", "trials", "episodes"):
        return int(value)
    if key == "theta":
        return float(value)
    if key == "epsilons":
        return tuple(float(v) for v in value.split(",") if v.strip())
    return value


def derive_seed(root: int, name: str) -> int:
    """Deterministic per-module child seed of a 64-bit root seed."""
    ss = np.random.SeedSequence([int(root), zlib.crc32(name.encode())])
    return int(ss.generate_state(1, dtype=np.uint64)[0])

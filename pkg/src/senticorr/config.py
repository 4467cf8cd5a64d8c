"""Pipeline configuration: JSON file plus CLI overrides."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from senticorr.classifier import DEFAULT_ALPHA_GRID, DEFAULT_C_GRID
from senticorr.stats.mic import DEFAULT_B_EXPONENT, DEFAULT_CLUMP_FACTOR


@dataclass
class PipelineConfig:
    alpha_grid: list[float] = None
    c_grid: list[float] = None
    k: int = 5
    seed: int = 0
    mic_b_exponent: float = DEFAULT_B_EXPONENT
    mic_clump_factor: int = DEFAULT_CLUMP_FACTOR
    tokenizer: str = "pretokenized"

    def __post_init__(self):
        if self.alpha_grid is None:
            self.alpha_grid = list(DEFAULT_ALPHA_GRID)
        if self.c_grid is None:
            self.c_grid = list(DEFAULT_C_GRID)
        self.alpha_grid = [float(a) for a in self.alpha_grid]
        self.c_grid = [float(c) for c in self.c_grid]
        self.validate()

    def validate(self) -> None:
        if not self.alpha_grid or not self.c_grid:
            raise ValueError("alpha_grid and c_grid must be non-empty")
        reals = [*self.alpha_grid, *self.c_grid, self.mic_b_exponent]
        if not all(math.isfinite(v) for v in reals):
            raise ValueError("config values must be finite")
        if any(c <= 0 for c in self.c_grid):
            raise ValueError("C values must be positive")
        if int(self.k) != self.k or self.k < 2:
            raise ValueError("k must be an integer >= 2")
        if self.tokenizer not in ("pretokenized", "fallback"):
            raise ValueError(f"unknown tokenizer {self.tokenizer!r}")
        if self.mic_clump_factor < 1:
            raise ValueError("mic_clump_factor must be >= 1")

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

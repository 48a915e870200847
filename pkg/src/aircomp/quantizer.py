"""Unbiased stochastic scalar quantizer applied entry-wise to gradients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuantizerConfig:
    """``levels`` equally spaced points spanning ``[g_min, g_max]``."""

    levels: int
    g_min: float
    g_max: float

    def __post_init__(self):
        if int(self.levels) != self.levels or self.levels < 2:
            raise ValueError(f"levels must be an integer >= 2, got {self.levels}")
        if not self.g_max > self.g_min:
            raise ValueError(f"need g_max > g_min, got [{self.g_min}, {self.g_max}]")

    @classmethod
    def symmetric(cls, levels: int, bound: float) -> "QuantizerConfig":
        return cls(levels, -bound, bound)

    @property
    def step(self) -> float:
        return (self.g_max - self.g_min) / (self.levels - 1)


def scaled_level(cfg: QuantizerConfig, g) -> np.ndarray:
    """Affine image of ``g`` (after clipping) on the level grid ``[0, q-1]``."""
    g = np.clip(np.asarray(g, dtype=float), cfg.g_min, cfg.g_max)
    x = (cfg.levels - 1) * (g - cfg.g_min) / (cfg.g_max - cfg.g_min)
    return np.clip(x, 0, cfg.levels - 1)


def quantize(cfg: QuantizerConfig, g, rng: np.random.Generator) -> np.ndarray:
    """Stochastically round each entry of ``g`` to a level index in ``[0, q-1]``.

    The upper neighbour is chosen with probability equal to the fractional
    part of the scaled value, so integral values are returned unchanged.
    Inputs outside ``[g_min, g_max]`` are clipped first.
    """
    x = scaled_level(cfg, g)
    low = np.floor(x)
    up = rng.random(np.shape(x)) < (x - low)
    return (low + up).astype(np.int64)


def dequantize_sum(cfg: QuantizerConfig, x, num_devices: int) -> np.ndarray:
    """Map a sum of ``num_devices`` level indices back to a sum of gradients."""
    if num_devices < 1:
        raise ValueError(f"num_devices must be >= 1, got {num_devices}")
    x = np.asarray(x)
    top = num_devices * (cfg.levels - 1)
    if np.any(x < 0) or np.any(x > top):
        raise ValueError(f"quantized sum outside [0, {top}]")
    return num_devices * cfg.g_min + (cfg.g_max - cfg.g_min) * x / (cfg.levels - 1)

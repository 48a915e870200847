"""Balanced-numeral lattice code.

Each quantized gradient entry is written with ``digits`` balanced base-``base``
digits, and digit ``l`` is sent on channel use ``l`` as a point of a scaled
integer lattice. The channel adds the devices' points, so rounding the
received vector back to the lattice and re-weighting the digits yields the
integer sum directly. The digit sums may leave the alphabet; the decoder
never clamps them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import Lattice, cubic_lattice


@dataclass(frozen=True)
class BalancedConfig:
    base: int = 5
    digits: int = 2
    power: float = 1.0
    levels: int = 25

    def __post_init__(self):
        if self.base < 3 or self.base % 2 == 0:
            raise ValueError(f"base must be an odd integer >= 3, got {self.base}")
        if self.digits < 1:
            raise ValueError(f"digits must be positive, got {self.digits}")
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power}")
        if self.levels < 2 or self.levels % 2 == 0:
            raise ValueError(f"levels must be odd and >= 3, got {self.levels}")
        if self.base**self.digits < self.levels:
            raise ValueError(
                f"{self.digits} digits of base {self.base} cannot hold {self.levels} levels"
            )

    @property
    def max_digit(self) -> int:
        return (self.base - 1) // 2

    @property
    def max_value(self) -> int:
        """Largest magnitude representable with ``digits`` balanced digits."""
        return (self.base**self.digits - 1) // 2

    @property
    def edge(self) -> float:
        """Lattice spacing ``sqrt(P_X) / ((base - 1) / 2)``."""
        return math.sqrt(self.power) / self.max_digit

    @property
    def weights(self) -> np.ndarray:
        return self.base ** np.arange(self.digits, dtype=np.int64)

    def lattice(self) -> Lattice:
        return cubic_lattice(self.edge, self.digits)[0]


def to_balanced_digits(cfg: BalancedConfig, z) -> np.ndarray:
    """Balanced digits of ``z``; the last axis holds ``(d_0, ..., d_{digits-1})``."""
    z = np.asarray(z, dtype=np.int64)
    if np.any(np.abs(z) > cfg.max_value):
        raise ValueError(f"value outside [-{cfg.max_value}, {cfg.max_value}]")
    h = cfg.max_digit
    out = np.empty(z.shape + (cfg.digits,), dtype=np.int64)
    for ell in range(cfg.digits):
        r = np.mod(z + h, cfg.base) - h
        out[..., ell] = r
        z = (z - r) // cfg.base
    return out


def from_digits(cfg: BalancedConfig, d) -> np.ndarray:
    return np.asarray(d, dtype=np.int64) @ cfg.weights


def recenter(cfg: BalancedConfig, level) -> np.ndarray:
    """Shift level indices ``[0, q-1]`` onto the symmetric range around zero."""
    level = np.asarray(level, dtype=np.int64)
    if np.any(level < 0) or np.any(level > cfg.levels - 1):
        raise ValueError(f"level outside [0, {cfg.levels - 1}]")
    return level - (cfg.levels - 1) // 2


def uncenter_sum(cfg: BalancedConfig, total, num_devices: int) -> np.ndarray:
    """Inverse of :func:`recenter` for a sum over ``num_devices`` devices."""
    return np.asarray(total, dtype=np.int64) + num_devices * ((cfg.levels - 1) // 2)


def encode(cfg: BalancedConfig, d) -> np.ndarray:
    d = np.asarray(d, dtype=np.int64)
    if d.shape[-1:] != (cfg.digits,):
        raise ValueError(f"expected {cfg.digits} digits, got shape {d.shape}")
    if np.any(np.abs(d) > cfg.max_digit):
        raise ValueError(f"digit outside [-{cfg.max_digit}, {cfg.max_digit}]")
    return cfg.edge * d


def decode_digits(cfg: BalancedConfig, y) -> np.ndarray:
    """Per-coordinate nearest multiple of the lattice spacing, as integers."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1:] != (cfg.digits,):
        raise ValueError(f"expected trailing dimension {cfg.digits}, got shape {y.shape}")
    x = y / cfg.edge
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


def decode_sum(cfg: BalancedConfig, y) -> np.ndarray:
    return decode_digits(cfg, y) @ cfg.weights


def encode_values(cfg: BalancedConfig, z) -> np.ndarray:
    """Convenience: symmetric integers straight to transmit vectors."""
    return encode(cfg, to_balanced_digits(cfg, z))

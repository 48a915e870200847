"""Real AWGN multiple-access channel: the receiver sees the sum of all inputs plus noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def snr_to_noise_power(snr_db: float, power: float) -> float:
    if not power > 0:
        raise ValueError(f"power must be positive, got {power}")
    return power * 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class ChannelConfig:
    """Per-coordinate noise variance ``noise_power``.

    ``noiseless`` skips the noise entirely while keeping ``noise_power``
    finite, so receivers that scale by an MMSE factor stay well defined.
    """

    noise_power: float
    num_devices: int = 1
    noiseless: bool = False

    def __post_init__(self):
        if not self.noise_power > 0:
            raise ValueError(f"noise_power must be positive, got {self.noise_power}")
        if self.num_devices < 1:
            raise ValueError(f"num_devices must be >= 1, got {self.num_devices}")

    @classmethod
    def from_snr(cls, snr_db: float, power: float, num_devices: int = 1,
                 noiseless: bool = False) -> "ChannelConfig":
        return cls(snr_to_noise_power(snr_db, power), num_devices, noiseless)

    @property
    def effective_noise_power(self) -> float:
        return 0.0 if self.noiseless else self.noise_power


def awgn(cfg: ChannelConfig, shape, rng: np.random.Generator) -> np.ndarray:
    if cfg.noiseless:
        return np.zeros(shape)
    return rng.normal(0.0, np.sqrt(cfg.noise_power), size=shape)


def transmit(cfg: ChannelConfig, signals, rng: np.random.Generator) -> np.ndarray:
    """Superpose the devices' signals and add Gaussian noise.

    ``signals`` is a sequence (or array with leading axis) of ``K`` equally
    shaped transmit arrays.
    """
    if len(signals) == 0:
        raise ValueError("no signals to transmit")
    try:
        x = np.asarray(signals, dtype=float)
    except ValueError as exc:
        raise ValueError("all signals must share one shape") from exc
    if x.dtype == object or x.ndim < 2:
        raise ValueError("all signals must share one shape")
    if x.shape[0] != cfg.num_devices:
        raise ValueError(f"expected {cfg.num_devices} signals, got {x.shape[0]}")
    total = x.sum(axis=0)
    return total + awgn(cfg, total.shape, rng)

"""Toy federated training loop whose gradient sums travel over the coded MAC.

The learning task is least-squares regression on synthetic Gaussian data,
which keeps the exact gradient and the optimum available for checks.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import balanced, nested
from .channel import ChannelConfig, transmit
from .lattice import hexagonal_lattice
from .quantizer import QuantizerConfig, dequantize_sum, quantize

TRAIN_SCHEMES = ("balanced", "nested", "ideal")


@dataclass(frozen=True)
class TrainConfig:
    """Training and link parameters.

    ``scheme="ideal"`` aggregates the quantized gradients without a channel;
    it is the error-free baseline for the two codes.
    """

    dim: int = 8
    clients: int = 5
    rounds: int = 100
    lr: float = 0.1
    clip: float = 1.0
    scheme: str = "balanced"
    snr_db: float = 20.0
    levels: int = 25
    base: int = 5
    digits: int = 2
    power: float = 1.0
    mmse: bool = True
    noiseless: bool = False
    samples_per_client: int = 50
    label_noise: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if not self.lr > 0 or not self.clip > 0:
            raise ValueError("lr and clip must be positive")
        if self.dim < 1 or self.clients < 1 or self.rounds < 0 or self.samples_per_client < 1:
            raise ValueError("dim, clients and samples_per_client must be positive; rounds >= 0")
        if self.scheme not in TRAIN_SCHEMES:
            raise ValueError(f"scheme must be one of {TRAIN_SCHEMES}, got {self.scheme!r}")

    @property
    def quantizer(self) -> QuantizerConfig:
        return QuantizerConfig.symmetric(self.levels, self.clip)


@dataclass
class ClientData:
    features: np.ndarray
    labels: np.ndarray


@dataclass
class TrainState:
    theta: np.ndarray
    round: int = 0


@dataclass
class TrainResult:
    losses: np.ndarray
    theta: np.ndarray
    scheme: str


def make_data(cfg: TrainConfig) -> tuple[list, np.ndarray]:
    """Per-client linear-regression data sharing one weight vector."""
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(0,)))
    w_true = rng.normal(size=cfg.dim)
    data = []
    for _ in range(cfg.clients):
        x = rng.normal(size=(cfg.samples_per_client, cfg.dim))
        y = x @ w_true + cfg.label_noise * rng.normal(size=cfg.samples_per_client)
        data.append(ClientData(x, y))
    return data, w_true


def loss(theta: np.ndarray, data: list) -> float:
    """Mean squared error over the union of the clients' samples."""
    x = np.concatenate([d.features for d in data])
    y = np.concatenate([d.labels for d in data])
    r = x @ theta - y
    return float(r @ r / len(y))


def client_gradient(theta: np.ndarray, data: ClientData, clip: float | None = None) -> np.ndarray:
    """Gradient of the client's mean squared error, optionally clipped entry-wise."""
    if len(data.labels) == 0:
        raise ValueError("client has no data")
    r = data.features @ theta - data.labels
    g = 2.0 * data.features.T @ r / len(r)
    return g if clip is None else np.clip(g, -clip, clip)


class Link:
    """Carries the clients' quantized gradients to the federator as one integer sum per entry."""

    def __init__(self, cfg: TrainConfig):
        self.cfg = cfg
        self.channel = ChannelConfig.from_snr(cfg.snr_db, cfg.power, cfg.clients, cfg.noiseless)
        self.top = cfg.clients * (cfg.levels - 1)
        if cfg.scheme == "balanced":
            self.bcfg = balanced.BalancedConfig(cfg.base, cfg.digits, cfg.power, cfg.levels)
        elif cfg.scheme == "nested":
            shaping, _ = hexagonal_lattice(cfg.power)
            p = nested.smallest_prime_above(self.top)
            nested.validate_prime(p, cfg.clients, cfg.levels)
            self.code = nested.build_code(shaping, p, rng_seed=cfg.seed)
            self.receiver = nested.ReceiverConfig(cfg.clients, self.channel.effective_noise_power,
                                                  cfg.power, cfg.mmse)

    def send(self, levels: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """``levels`` has shape (K, k); returns the decoded sums, clipped to the valid range."""
        cfg = self.cfg
        if cfg.scheme == "ideal":
            return levels.sum(axis=0)
        if cfg.scheme == "balanced":
            x = balanced.encode_values(self.bcfg, balanced.recenter(self.bcfg, levels))
            y = transmit(self.channel, x, rng)
            total = balanced.uncenter_sum(self.bcfg, balanced.decode_sum(self.bcfg, y), cfg.clients)
        else:
            dithers = self.code.shaping.sample_dither(rng, levels.shape)
            x = nested.encode(self.code, levels, dithers)
            y = transmit(self.channel, x, rng)
            total = nested.decode_sum(self.code, self.receiver, y, dithers, method="reduced")
        return np.clip(total, 0, self.top)


def train_round(cfg: TrainConfig, state: TrainState, data: list, link: Link,
                rng: np.random.Generator) -> TrainState:
    grads = np.array([client_gradient(state.theta, d, cfg.clip) for d in data])
    levels = quantize(cfg.quantizer, grads, rng)
    g_sum = dequantize_sum(cfg.quantizer, link.send(levels, rng), cfg.clients)
    return TrainState(state.theta - cfg.lr / cfg.clients * g_sum, state.round + 1)


def train(cfg: TrainConfig, out=None) -> TrainResult:
    """Run ``cfg.rounds`` rounds from a zero model; ``losses[t]`` is the loss before round t+1."""
    data, _ = make_data(cfg)
    link = Link(cfg)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(1,)))
    state = TrainState(np.zeros(cfg.dim))
    losses = [loss(state.theta, data)]
    for _ in range(cfg.rounds):
        state = train_round(cfg, state, data, link, rng)
        losses.append(loss(state.theta, data))
    result = TrainResult(np.array(losses), state.theta, cfg.scheme)
    if out is not None:
        write_losses(result, out)
    return result


def baseline(cfg: TrainConfig) -> TrainResult:
    """Same data and seed with error-free aggregation of the quantized gradients."""
    return train(replace(cfg, scheme="ideal"))


def write_losses(result: TrainResult, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["Round", "Loss", "Scheme"])
        for t, value in enumerate(result.losses):
            writer.writerow([t, f"{value:.6g}", result.scheme])
    return path

"""Monte-Carlo block-error sweeps comparing the balanced and nested codes.

Every work unit draws its randomness from a stream derived from the sweep
seed and the unit's identity (scheme, SNR, K, generator index, chunk index),
so the error counts do not depend on how units are scheduled over threads.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import balanced, nested
from .bounds import (
    exact_pe_balanced,
    upper_pe_balanced,
    upper_pe_nested,
    upper_pe_nested_unit,
)
from .channel import ChannelConfig, snr_to_noise_power, transmit
from .lattice import hexagonal_lattice

SCHEMES = ("nested", "balanced")
CSV_COLUMNS = [
    "Num_Devices",
    "Median_Nested", "Min_Nested", "Max_Nested",
    "Median_Balanced", "Min_Balanced", "Max_Balanced",
]
BOUND_COLUMNS = ["Exact_Balanced", "Bound_Balanced", "Bound_Nested"]

_TAG_BALANCED_NOISE = 1
_TAG_BALANCED_MSG = 2
_TAG_NESTED = 3
_TAG_GENERATOR = 4


@dataclass(frozen=True)
class SweepConfig:
    snr_db_list: tuple = (2.0, 2.35)
    devices_list: tuple = (1, 2, 3, 4, 5)
    samples: int = 100_000
    generators: int = 20
    levels: int = 25
    base: int = 5
    digits: int = 2
    power: float = 1.0
    seed: int = 7
    schemes: tuple = SCHEMES
    mmse: bool = True
    noiseless: bool = False
    dmax: int = 3
    prime: int | None = None
    random_messages: bool = False
    chunk_size: int = 50_000

    def __post_init__(self):
        for name in ("snr_db_list", "devices_list", "schemes"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.samples < 1 or self.generators < 1 or self.chunk_size < 1:
            raise ValueError("samples, generators and chunk_size must be positive")
        if not self.devices_list or min(self.devices_list) < 1:
            raise ValueError("devices_list needs positive device counts")
        if not self.snr_db_list:
            raise ValueError("snr_db_list is empty")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown or not self.schemes:
            raise ValueError(f"schemes must be a non-empty subset of {SCHEMES}, got {self.schemes}")
        if self.levels % 2 == 0:
            raise ValueError(f"levels must be odd, got {self.levels}")
        if self.prime is not None:
            nested.validate_prime(self.prime, max(self.devices_list), self.levels)

    @property
    def balanced_config(self) -> balanced.BalancedConfig:
        return balanced.BalancedConfig(self.base, self.digits, self.power, self.levels)

    def prime_for(self, num_devices: int) -> int:
        """Override, or the smallest prime above ``K (q - 1)``."""
        if self.prime is not None:
            return self.prime
        return nested.smallest_prime_above(num_devices * (self.levels - 1))


@dataclass
class SweepRow:
    snr_db: float
    num_devices: int
    prime: int
    samples: int
    nested_rates: np.ndarray | None = None
    balanced_rate: float | None = None
    exact_balanced: float = math.nan
    bound_balanced: float = math.nan
    bound_nested: float = math.nan

    def nested_summary(self) -> tuple[float, float, float]:
        """(median, min, max) across generator draws."""
        if self.nested_rates is None:
            return (math.nan,) * 3
        r = self.nested_rates
        return float(np.median(r)), float(r.min()), float(r.max())

    def balanced_summary(self) -> tuple[float, float, float]:
        if self.balanced_rate is None:
            return (math.nan,) * 3
        return (self.balanced_rate,) * 3

    def standard_error(self, rate: float) -> float:
        return math.sqrt(rate * (1 - rate) / self.samples)


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list = field(default_factory=list)
    elapsed: float = 0.0

    def rows_for(self, snr_db: float) -> list:
        return sorted((r for r in self.rows if r.snr_db == snr_db), key=lambda r: r.num_devices)

    def row(self, snr_db: float, num_devices: int) -> SweepRow:
        for r in self.rows:
            if r.snr_db == snr_db and r.num_devices == num_devices:
                return r
        raise KeyError((snr_db, num_devices))


def _snr_key(snr_db: float) -> int:
    return int(round(snr_db * 1_000_000)) & 0xFFFFFFFF


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _chunks(total: int, size: int):
    for idx, start in enumerate(range(0, total, size)):
        yield idx, min(size, total - start)


def balanced_errors(cfg: SweepConfig, snr_db: float, num_devices: int) -> int:
    """Decoding errors of the balanced code over ``cfg.samples`` trials.

    The noise stream is keyed by SNR only, so every K sees the same noise.
    """
    bcfg = cfg.balanced_config
    ch = ChannelConfig.from_snr(snr_db, cfg.power, num_devices, cfg.noiseless)
    half = (cfg.levels - 1) // 2
    errors = 0
    for chunk, m in _chunks(cfg.samples, cfg.chunk_size):
        noise_rng = _stream(cfg.seed, _TAG_BALANCED_NOISE, _snr_key(snr_db), chunk)
        if cfg.random_messages:
            msg_rng = _stream(cfg.seed, _TAG_BALANCED_MSG, _snr_key(snr_db), num_devices, chunk)
            z = msg_rng.integers(-half, half + 1, size=(num_devices, m))
        else:
            z = np.zeros((num_devices, m), dtype=np.int64)
        x = balanced.encode_values(bcfg, z)
        y = transmit(ch, x, noise_rng)
        errors += int(np.count_nonzero(balanced.decode_sum(bcfg, y) != z.sum(axis=0)))
    return errors


def build_sweep_code(cfg: SweepConfig, num_devices: int, generator_index: int) -> nested.NestedCode:
    shaping, _ = hexagonal_lattice(cfg.power)
    p = cfg.prime_for(num_devices)
    rng = _stream(cfg.seed, _TAG_GENERATOR, p, generator_index)
    return nested.build_code(shaping, p, nested.random_generator(p, shaping.dimension, rng))


def nested_errors(cfg: SweepConfig, code: nested.NestedCode, snr_db: float,
                  num_devices: int, generator_index: int) -> int:
    """Decoding errors of one nested code over ``cfg.samples`` trials."""
    ch = ChannelConfig.from_snr(snr_db, cfg.power, num_devices, cfg.noiseless)
    rcfg = nested.ReceiverConfig(num_devices, ch.effective_noise_power, cfg.power, cfg.mmse)
    errors = 0
    for chunk, m in _chunks(cfg.samples, cfg.chunk_size):
        rng = _stream(cfg.seed, _TAG_NESTED, _snr_key(snr_db), num_devices, generator_index, chunk)
        dither_rng, msg_rng, noise_rng = rng.spawn(3)
        dithers = code.shaping.sample_dither(dither_rng, (num_devices, m))
        if cfg.random_messages:
            w = msg_rng.integers(0, cfg.levels, size=(num_devices, m))
        else:
            w = np.zeros((num_devices, m), dtype=np.int64)
        x = nested.encode(code, w, dithers)
        y = transmit(ch, x, noise_rng)
        w_hat = nested.decode_sum(code, rcfg, y, dithers, method="reduced")
        errors += int(np.count_nonzero(w_hat != w.sum(axis=0)))
    return errors


def thread_count() -> int:
    env = os.environ.get("AIRCOMP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(cfg: SweepConfig, threads: int | None = None) -> SweepResult:
    """Empirical error rates and bounds for every (SNR, K) pair of the config."""
    started = time.perf_counter()
    threads = threads or thread_count()
    shaping, shaping_stats = hexagonal_lattice(cfg.power)
    do_nested = "nested" in cfg.schemes
    do_balanced = "balanced" in cfg.schemes

    codes = {}
    if do_nested:
        for k in cfg.devices_list:
            for g in range(cfg.generators):
                codes[k, g] = build_sweep_code(cfg, k, g)

    jobs = {}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for snr in cfg.snr_db_list:
            if do_balanced:
                if cfg.random_messages:
                    for k in cfg.devices_list:
                        jobs["b", snr, k] = pool.submit(balanced_errors, cfg, snr, k)
                else:
                    # zero messages: the error event is the same for every K
                    jobs["b", snr] = pool.submit(balanced_errors, cfg, snr, 1)
            if do_nested:
                for (k, g), code in codes.items():
                    jobs["n", snr, k, g] = pool.submit(nested_errors, cfg, code, snr, k, g)
        counts = {key: fut.result() for key, fut in jobs.items()}

    bcfg = cfg.balanced_config
    result = SweepResult(cfg)
    for snr in cfg.snr_db_list:
        pn = snr_to_noise_power(snr, cfg.power)
        for k in cfg.devices_list:
            p = cfg.prime_for(k)
            row = SweepRow(snr, k, p, cfg.samples)
            if do_balanced:
                n_err = counts["b", snr, k] if cfg.random_messages else counts["b", snr]
                row.balanced_rate = n_err / cfg.samples
            if do_nested:
                row.nested_rates = np.array(
                    [counts["n", snr, k, g] / cfg.samples for g in range(cfg.generators)])
            eff_pn = 0.0 if cfg.noiseless else pn
            row.exact_balanced = exact_pe_balanced(bcfg, eff_pn, 1, cfg.dmax)
            row.bound_balanced = upper_pe_balanced(cfg.levels, cfg.digits, cfg.power, eff_pn, 1)
            if cfg.mmse:
                scale = k * cfg.power / (eff_pn + k * cfg.power)
                row.bound_nested = upper_pe_nested(shaping_stats, shaping.dimension, p, k,
                                                   scale, cfg.power, eff_pn)
            else:
                row.bound_nested = upper_pe_nested_unit(shaping_stats, shaping.dimension, p, eff_pn)
            result.rows.append(row)
    result.elapsed = time.perf_counter() - started
    return result


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6g}"


def emit_csv(result: SweepResult, path, snr_db: float | None = None, bounds: bool = False) -> Path:
    """Write one row per device count for a single SNR.

    ``snr_db`` may be omitted when the sweep covers exactly one SNR.
    """
    snrs = result.config.snr_db_list
    if snr_db is None:
        if len(snrs) != 1:
            raise ValueError("sweep has several SNRs; pass snr_db")
        snr_db = snrs[0]
    path = Path(path)
    header = CSV_COLUMNS + (BOUND_COLUMNS if bounds else [])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in result.rows_for(snr_db):
            vals = [*row.nested_summary(), *row.balanced_summary()]
            if bounds:
                vals += [row.exact_balanced, row.bound_balanced, row.bound_nested]
            writer.writerow([row.num_devices, *map(_fmt, vals)])
    return path


def csv_paths(path, snr_list) -> dict:
    """Output file per SNR: ``path`` itself for one SNR, else ``<stem>_SNR_<x.xx><suffix>``."""
    path = Path(path)
    if len(snr_list) == 1:
        return {snr_list[0]: path}
    return {s: path.with_name(f"{path.stem}_SNR_{s:.2f}{path.suffix}") for s in snr_list}


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))

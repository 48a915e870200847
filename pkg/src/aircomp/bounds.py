"""Error probabilities and upper bounds for both codes."""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.special import ndtr
from scipy.stats import chi2

from .balanced import BalancedConfig
from .lattice import LatticeStats, ball_normalized_second_moment


def zero_sum_digit_set(base: int, digits: int, dmax: int) -> np.ndarray:
    """Integer digit vectors whose weighted sum ``sum d_l base^l`` vanishes.

    The set is a rank ``digits - 1`` lattice parametrised by the higher-order
    digits ``d_1 .. d_{digits-1}``, with ``d_0`` then fixed by the zero-sum
    constraint. Truncation keeps the members whose higher-order digits lie in
    ``[-dmax, dmax]``; ``dmax=0`` leaves only the zero vector.
    """
    if dmax < 0:
        raise ValueError(f"dmax must be >= 0, got {dmax}")
    higher = np.array(list(itertools.product(range(-dmax, dmax + 1), repeat=digits - 1)),
                      dtype=np.int64).reshape(-1, digits - 1)
    weights = base ** np.arange(1, digits, dtype=np.int64)
    d0 = -(higher @ weights)
    return np.column_stack([d0, higher])


def _interval_prob(lo: np.ndarray, hi: np.ndarray, sigma: float) -> np.ndarray:
    """``P(lo <= N <= hi)`` for ``N ~ N(0, sigma^2)``, accurate in both tails."""
    a, b = lo / sigma, hi / sigma
    upper = ndtr(-a) - ndtr(-b)
    lower = ndtr(b) - ndtr(a)
    return np.where(a > 0, upper, lower)


def exact_pe_balanced(cfg: BalancedConfig, noise_power: float, k: int = 1, dmax: int = 3) -> float:
    """Error probability of the balanced code over ``k`` gradient entries.

    Decoding one entry succeeds exactly when the rounded noise vector is a
    zero-sum digit vector; the success mass is summed over the truncated set.
    """
    if noise_power <= 0:
        return 0.0
    sigma = math.sqrt(noise_power)
    d = zero_sum_digit_set(cfg.base, cfg.digits, dmax).astype(float)
    cell = _interval_prob(cfg.edge * (d - 0.5), cfg.edge * (d + 0.5), sigma)
    success = float(np.sum(np.prod(cell, axis=1)))
    pe_entry = max(1.0 - success, 0.0)
    return -math.expm1(k * math.log1p(-pe_entry)) if pe_entry < 1 else 1.0


def _ceil_root(q: int, digits: int) -> int:
    """Exact ``ceil(q ** (1/digits))`` for positive integers."""
    r = max(int(round(q ** (1.0 / digits))) - 1, 1)
    while r**digits < q:
        r += 1
    while r > 1 and (r - 1) ** digits >= q:
        r -= 1
    return r


def upper_pe_balanced(levels: int, digits: int, power: float, noise_power: float, k: int = 1) -> float:
    """Bound that keeps only the zero vector of the zero-sum set.

    Uses the spacing ``sqrt(P_X) / ceil(q^(1/digits) - 1)``; with
    ``base = ceil(q^(1/digits))`` this is half the lattice edge.
    """
    if noise_power <= 0:
        return 0.0
    denom = _ceil_root(levels, digits) - 1
    if denom <= 0:
        raise ValueError("levels too small for the digit count")
    tail = ndtr(-math.sqrt(power) / denom / math.sqrt(noise_power))
    return -math.expm1(k * digits * math.log1p(-2.0 * tail))


def epsilon1(stats: LatticeStats, n: int) -> float:
    """``log(r_cov/r_eff) + 1/2 log(2 pi e G*_n) + 1/n`` with natural logs."""
    g_ball = ball_normalized_second_moment(n)
    return (math.log(stats.covering_radius / stats.effective_radius)
            + 0.5 * math.log(2 * math.pi * math.e * g_ball) + 1.0 / n)


def equivalent_noise_power(stats: LatticeStats, num_devices: int, scale: float,
                           power: float, noise_power: float) -> float:
    ratio = stats.covering_radius / stats.effective_radius
    return scale**2 * noise_power + num_devices * (1 - scale) ** 2 * ratio**2 * power


def upper_pe_nested(stats: LatticeStats, n: int, p: int, num_devices: int, scale: float,
                    power: float, noise_power: float) -> float:
    """Average error bound of the nested code for receiver scale ``scale``, clipped to 1."""
    pz = equivalent_noise_power(stats, num_devices, scale, power, noise_power)
    if pz <= 0:
        return 0.0
    log_tail = chi2.logsf(stats.packing_radius**2 / (p**2 * pz), n)
    log_val = num_devices * epsilon1(stats, n) * n + log_tail
    return float(min(math.exp(min(log_val, 0.0)), 1.0))


def upper_pe_nested_unit(stats: LatticeStats, n: int, p: int, noise_power: float) -> float:
    """Bound for the unit-scale receiver, where dithers cancel exactly."""
    if noise_power <= 0:
        return 0.0
    return float(chi2.sf(stats.packing_radius**2 / (p**2 * noise_power), n))

"""Fast brute-force cross-checks runnable from the command line."""

from __future__ import annotations

import itertools

import numpy as np

from . import balanced, nested
from .lattice import hexagonal_lattice
from .quantizer import QuantizerConfig, quantize


def _digits_round_trip():
    for base, digits in itertools.product((3, 5, 7), (1, 2, 3)):
        cfg = balanced.BalancedConfig(base, digits, 1.0, 3)
        z = np.arange(-cfg.max_value, cfg.max_value + 1)
        d = balanced.to_balanced_digits(cfg, z)
        assert np.all(np.abs(d) <= cfg.max_digit)
        assert np.array_equal(balanced.from_digits(cfg, d), z)


def _balanced_noiseless_sums():
    cfg = balanced.BalancedConfig(3, 2, 1.0, 9)
    alphabet = list(itertools.product(range(-1, 2), repeat=2))
    for combo in itertools.product(alphabet, repeat=3):
        d = np.array(combo)
        y = balanced.encode(cfg, d).sum(axis=0)
        assert balanced.decode_sum(cfg, y) == balanced.from_digits(cfg, d).sum()


def _nested_exhaustive_p5():
    shaping, _ = hexagonal_lattice(1.0)
    rng = np.random.default_rng(0)
    for g in ([1, 2], [1, 0], [0, 3], [4, 4]):
        code = nested.build_code(shaping, 5, g)
        rcfg = nested.ReceiverConfig(2, 0.0, 1.0)
        for w1, w2 in itertools.product(range(5), repeat=2):
            u = shaping.sample_dither(rng, 2)
            x = nested.encode(code, np.array([w1, w2]), u)
            w_hat = nested.decode_sum(code, rcfg, x.sum(axis=0), u)
            assert w_hat == (w1 + w2) % 5


def _hex_nearest_bruteforce():
    lat, _ = hexagonal_lattice(1.0)
    rng = np.random.default_rng(1)
    v = rng.uniform(-6, 6, size=(500, 2))
    grid = np.array(list(itertools.product(range(-8, 9), repeat=2)))
    pts = lat.point(grid)
    d = np.linalg.norm(v[:, None, :] - pts[None], axis=2)
    assert np.allclose(lat.nearest_point(v), pts[np.argmin(d, axis=1)])


def _fine_decoders_agree():
    shaping, _ = hexagonal_lattice(1.0)
    rng = np.random.default_rng(2)
    for seed in range(5):
        code = nested.build_code(shaping, 127, rng_seed=seed)
        y = shaping.sample_dither(rng, 500)
        assert np.array_equal(nested.decode_fine(code, y, "enumerate"),
                              nested.decode_fine(code, y, "reduced"))


def _quantizer_endpoints():
    cfg = QuantizerConfig.symmetric(25, 1.0)
    rng = np.random.default_rng(3)
    assert np.all(quantize(cfg, np.full(100, 1.0), rng) == 24)
    assert np.all(quantize(cfg, np.zeros(100), rng) == 12)


def _prime_guard():
    try:
        nested.validate_prime(47, 2, 25)
    except nested.PrimeTooSmall:
        return
    raise AssertionError("p=47 accepted for K=2, q=25")


CHECKS = {
    "balanced digit round trip": _digits_round_trip,
    "balanced noiseless sums (base 3, 2 digits, K=3)": _balanced_noiseless_sums,
    "nested noiseless sums (p=5, K=2)": _nested_exhaustive_p5,
    "hexagonal nearest point vs brute force": _hex_nearest_bruteforce,
    "fine-lattice decoders agree (p=127)": _fine_decoders_agree,
    "quantizer endpoints": _quantizer_endpoints,
    "prime guard rejects p=47, K=2, q=25": _prime_guard,
}


def run_selftest(echo=print) -> bool:
    ok = True
    for name, check in CHECKS.items():
        try:
            check()
        except AssertionError as exc:
            ok = False
            echo(f"FAIL  {name}: {exc}")
        else:
            echo(f"ok    {name}")
    return ok

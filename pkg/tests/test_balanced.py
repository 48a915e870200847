import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aircomp import balanced
from aircomp.balanced import BalancedConfig

CFG = BalancedConfig(5, 2, 1.0, 25)


def search_digits(base, digits, z):
    h = (base - 1) // 2
    hits = [d for d in itertools.product(range(-h, h + 1), repeat=digits)
            if sum(x * base**i for i, x in enumerate(d)) == z]
    assert len(hits) == 1
    return hits[0]


@pytest.mark.parametrize("z", [0, 12, -7, 5, -12])
def test_digits_match_exhaustive_search(z):
    assert tuple(balanced.to_balanced_digits(CFG, z)) == search_digits(5, 2, z)


def test_digit_examples():
    assert tuple(balanced.to_balanced_digits(CFG, 12)) == (2, 2)
    assert tuple(balanced.to_balanced_digits(CFG, -7)) == (-2, -1)
    assert tuple(balanced.to_balanced_digits(CFG, 0)) == (0, 0)


@pytest.mark.parametrize("base,digits", list(itertools.product((3, 5, 7), (1, 2, 3))))
def test_round_trip_exhaustive(base, digits):
    cfg = BalancedConfig(base, digits, 1.0, 3)
    z = np.arange(-cfg.max_value, cfg.max_value + 1)
    assert np.array_equal(balanced.from_digits(cfg, balanced.to_balanced_digits(cfg, z)), z)


def test_out_of_range_value():
    with pytest.raises(ValueError):
        balanced.to_balanced_digits(CFG, 13)


def test_recenter():
    assert balanced.recenter(CFG, 12) == 0
    assert balanced.recenter(CFG, 0) == -12
    assert balanced.recenter(CFG, 24) == 12
    with pytest.raises(ValueError):
        balanced.recenter(CFG, 25)


def test_config_validation():
    with pytest.raises(ValueError):
        BalancedConfig(4, 2, 1.0, 9)
    with pytest.raises(ValueError):
        BalancedConfig(5, 2, 1.0, 24)
    with pytest.raises(ValueError):
        BalancedConfig(3, 2, 1.0, 11)


def test_encode_examples():
    assert np.array_equal(balanced.encode(CFG, [0, 0]), [0, 0])
    assert np.allclose(balanced.encode(CFG, [2, 2]), [1, 1])
    assert CFG.edge == 0.5
    with pytest.raises(ValueError):
        balanced.encode(CFG, [3, 0])


def test_peak_power():
    z = np.arange(-12, 13)
    x = balanced.encode_values(CFG, z)
    assert np.max(np.abs(x)) <= np.sqrt(CFG.power) + 1e-12


@given(st.lists(st.integers(-2, 2), min_size=2, max_size=2),
       st.lists(st.integers(-2, 2), min_size=2, max_size=2))
def test_encoder_linearity(a, b):
    lhs = balanced.encode(CFG, a) + balanced.encode(CFG, b)
    assert np.allclose(lhs, CFG.edge * (np.array(a) + np.array(b)))


def test_decode_examples():
    assert balanced.decode_sum(CFG, [1.1, -0.2]) == 2
    assert tuple(balanced.decode_digits(CFG, [1.1, -0.2])) == (2, 0)
    assert balanced.decode_sum(CFG, [0.24, 0.0]) == 0


def test_noiseless_sums_exhaustive_base3():
    cfg = BalancedConfig(3, 2, 1.0, 9)
    alphabet = list(itertools.product(range(-1, 2), repeat=2))
    for combo in itertools.product(alphabet, repeat=3):
        d = np.array(combo)
        assert balanced.decode_sum(cfg, balanced.encode(cfg, d).sum(axis=0)) == d @ cfg.weights @ np.ones(3)


@given(st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_noiseless_sums_random(k, seed):
    rng = np.random.default_rng(seed)
    z = rng.integers(-12, 13, size=k)
    y = balanced.encode_values(CFG, z).sum(axis=0)
    assert balanced.decode_sum(CFG, y) == z.sum()


def test_error_depends_only_on_noise(rng):
    noise = rng.normal(scale=0.8, size=(20_000, 2))
    reference = balanced.decode_sum(CFG, noise)
    for k in (1, 2, 5, 9):
        z = rng.integers(-12, 13, size=(k, 20_000))
        y = balanced.encode_values(CFG, z).sum(axis=0) + noise
        assert np.array_equal(balanced.decode_sum(CFG, y) - z.sum(axis=0), reference)


def test_decoder_does_not_clamp_digits():
    assert tuple(balanced.decode_digits(CFG, [4.0, -3.0])) == (8, -6)

import numpy as np
import pytest
from scipy import stats

from aircomp.channel import ChannelConfig, awgn, snr_to_noise_power, transmit


@pytest.mark.parametrize("snr_db, expected", [
    (0.0, 1.0),
    (2.0, 0.6309573444801932),
    (2.35, 0.5821032177708715),
])
def test_snr_conversion(snr_db, expected):
    assert snr_to_noise_power(snr_db, 1.0) == pytest.approx(expected, rel=1e-14)


def test_snr_conversion_scales_with_power():
    assert snr_to_noise_power(10.0, 4.0) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        snr_to_noise_power(0.0, 0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(0.0)
    with pytest.raises(ValueError):
        ChannelConfig(1.0, num_devices=0)
    cfg = ChannelConfig.from_snr(2.0, 1.0, 3)
    assert cfg.num_devices == 3
    assert cfg.noise_power == pytest.approx(0.6309573444801932)


def test_noise_variance():
    cfg = ChannelConfig(0.63, 1)
    y = transmit(cfg, np.zeros((1, 1_000_000)), np.random.default_rng(5))
    assert np.var(y) == pytest.approx(0.63, rel=0.01)
    assert abs(np.mean(y)) < 4 * np.sqrt(0.63 / 1e6)


def test_noise_is_gaussian():
    z = awgn(ChannelConfig(2.0), 100_000, np.random.default_rng(11))
    assert stats.jarque_bera(z).pvalue > 0.01
    assert stats.normaltest(z).pvalue > 0.01


def test_noiseless_gives_exact_sum(rng):
    cfg = ChannelConfig(1.0, 4, noiseless=True)
    x = rng.normal(size=(4, 10, 2))
    assert np.array_equal(transmit(cfg, x, rng), x.sum(axis=0))
    assert cfg.effective_noise_power == 0.0


def test_same_seed_same_noise():
    cfg = ChannelConfig(0.5, 2)
    x = np.ones((2, 100))
    a = transmit(cfg, x, np.random.default_rng(3))
    b = transmit(cfg, x, np.random.default_rng(3))
    assert np.array_equal(a, b)


def test_additivity(rng):
    x = rng.normal(size=(3, 50, 2))
    many = transmit(ChannelConfig(0.7, 3), x, np.random.default_rng(9))
    one = transmit(ChannelConfig(0.7, 1), x.sum(axis=0, keepdims=True), np.random.default_rng(9))
    assert np.allclose(many, one, atol=1e-12)


def test_signal_errors():
    cfg = ChannelConfig(1.0, 2)
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        transmit(cfg, [], rng)
    with pytest.raises(ValueError):
        transmit(cfg, [np.zeros(2), np.zeros(3)], rng)
    with pytest.raises(ValueError):
        transmit(cfg, [np.zeros(2)] * 3, rng)

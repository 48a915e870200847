import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ndtr
from scipy.stats import chi2

from aircomp.balanced import BalancedConfig
from aircomp.bounds import (
    epsilon1,
    exact_pe_balanced,
    upper_pe_balanced,
    upper_pe_nested,
    upper_pe_nested_unit,
    zero_sum_digit_set,
)
from aircomp.channel import snr_to_noise_power
from aircomp.lattice import LatticeStats, ball_normalized_second_moment, hexagonal_lattice

CFG = BalancedConfig(5, 2, 1.0, 25)

# high-precision evaluations of the exact error probability (base 5, 2 digits, P_X = 1)
EXACT_PE = {0.0: 0.957798538609146, 2.0: 0.938141655670537,
            4.0: 0.905019331125991, 6.0: 0.854004988991322}
# 1 - (2 Phi(0.25 / sqrt(10^-0.2)) - 1)^2
ZERO_ONLY_PE_2DB = 0.9389740234539354
EPS1_HEX = 0.74840572642361781852


@pytest.mark.parametrize("base, digits", [(3, 2), (5, 2), (5, 3), (7, 2)])
def test_zero_sum_set(base, digits):
    d = zero_sum_digit_set(base, digits, 3)
    weights = base ** np.arange(digits)
    assert np.all(d @ weights == 0)
    rows = {tuple(r) for r in d}
    assert (0,) * digits in rows
    assert rows == {tuple(-r) for r in d}
    assert len(rows) == 7 ** (digits - 1)


def test_zero_sum_set_two_digits():
    d = zero_sum_digit_set(5, 2, 1)
    assert {tuple(r) for r in d} == {(0, 0), (-5, 1), (5, -1)}
    with pytest.raises(ValueError):
        zero_sum_digit_set(5, 2, -1)


def test_zero_only_truncation_matches_upper_bound():
    for snr in (0.0, 2.0, 6.0, 12.0):
        pn = snr_to_noise_power(snr, 1.0)
        for k in (1, 3):
            assert exact_pe_balanced(CFG, pn, k, dmax=0) == pytest.approx(
                upper_pe_balanced(25, 2, 1.0, pn, k), rel=1e-13)


def test_zero_only_worked_example():
    pn = snr_to_noise_power(2.0, 1.0)
    direct = 1 - (2 * ndtr(0.25 / math.sqrt(pn)) - 1) ** 2
    assert direct == pytest.approx(ZERO_ONLY_PE_2DB, rel=1e-14)
    assert upper_pe_balanced(25, 2, 1.0, pn) == pytest.approx(ZERO_ONLY_PE_2DB, rel=1e-13)


def test_zero_only_worked_example_monte_carlo():
    pn = snr_to_noise_power(2.0, 1.0)
    n = np.random.default_rng(17).normal(0, math.sqrt(pn), size=(1_000_000, 2))
    emp = 1 - np.mean(np.all(np.abs(n) < 0.25, axis=1))
    se = math.sqrt(ZERO_ONLY_PE_2DB * (1 - ZERO_ONLY_PE_2DB) / len(n))
    assert abs(emp - ZERO_ONLY_PE_2DB) < 3 * se


@pytest.mark.parametrize("snr", sorted(EXACT_PE))
def test_exact_pe_frozen_values(snr):
    pn = snr_to_noise_power(snr, 1.0)
    assert exact_pe_balanced(CFG, pn, 1, 3) == pytest.approx(EXACT_PE[snr], abs=1e-12)


@pytest.mark.parametrize("snr", [0.0, 2.0, 2.35, 6.0])
def test_truncation_convergence(snr):
    pn = snr_to_noise_power(snr, 1.0)
    pe = [exact_pe_balanced(CFG, pn, 1, d) for d in range(6)]
    assert all(a >= b for a, b in zip(pe, pe[1:]))
    steps = np.abs(np.diff(pe))
    assert all(a >= b for a, b in zip(steps, steps[1:]))
    assert abs(pe[3] - pe[4]) < 1e-6


def test_noiseless_limits(hexagon):
    lat, stats = hexagon
    assert exact_pe_balanced(CFG, 0.0) == 0.0
    assert upper_pe_balanced(25, 2, 1.0, 0.0) == 0.0
    assert upper_pe_nested_unit(stats, 2, 127, 0.0) == 0.0
    assert exact_pe_balanced(CFG, 1e-6) < 1e-12


def test_multi_entry_composition():
    pn = snr_to_noise_power(8.0, 1.0)
    one = exact_pe_balanced(CFG, pn, 1)
    assert exact_pe_balanced(CFG, pn, 4) == pytest.approx(1 - (1 - one) ** 4, rel=1e-12)


def test_upper_bound_root_rounding():
    pn = 0.1
    # ceil(26^(1/2)) - 1 = 5 but ceil(25^(1/2)) - 1 = 4
    assert upper_pe_balanced(26, 2, 1.0, pn) == pytest.approx(
        1 - (1 - 2 * ndtr(-0.2 / math.sqrt(pn))) ** 2, rel=1e-12)
    assert upper_pe_balanced(125, 3, 1.0, pn) == pytest.approx(
        1 - (1 - 2 * ndtr(-0.25 / math.sqrt(pn))) ** 3, rel=1e-12)


def test_epsilon1_hexagonal(hexagon):
    _, stats = hexagon
    assert epsilon1(stats, 2) == pytest.approx(EPS1_HEX, abs=1e-13)
    assert epsilon1(stats, 2) > 0


def test_epsilon1_limit():
    # covering radius equal to the effective radius and a ball's G at 1/(2 pi e)
    g = ball_normalized_second_moment(2)
    r = 1.0
    stats = LatticeStats(0.5, r, r, math.pi, 0.0, g)
    shift = 0.5 * math.log(2 * math.pi * math.e * g)
    assert epsilon1(stats, 2) - shift == pytest.approx(0.5, abs=1e-15)


def test_ball_second_moment_closed_form():
    assert ball_normalized_second_moment(2) == pytest.approx(1 / (4 * math.pi), rel=1e-14)
    # approaches 1/(2 pi e) from above as n grows
    big = ball_normalized_second_moment(400)
    assert 1 / (2 * math.pi * math.e) < big < ball_normalized_second_moment(2)


@pytest.mark.parametrize("p", [29, 127])
def test_unit_scale_bound_closed_form(hexagon, p):
    _, stats = hexagon
    for snr in (2.0, 6.0, 10.0, 30.0):
        pn = snr_to_noise_power(snr, 1.0)
        expected = math.exp(-stats.packing_radius**2 / (2 * p**2 * pn))
        assert upper_pe_nested_unit(stats, 2, p, pn) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(snr=st.floats(-5, 40), k=st.integers(1, 5))
def test_nested_bound_monotone(snr, k):
    _, stats = hexagonal_lattice(1.0)
    pn = snr_to_noise_power(snr, 1.0)
    primes = [29, 53, 127, 131, 257]
    for kk in (k, k + 1):
        a = kk / (pn + kk)
        vals = [upper_pe_nested(stats, 2, p, kk, a, 1.0, pn) for p in primes]
        assert all(0 <= v <= 1 for v in vals)
        assert all(x <= y for x, y in zip(vals, vals[1:]))
    a = k / (pn + k)
    assert (upper_pe_nested(stats, 2, 127, k, a, 1.0, pn)
            <= upper_pe_nested(stats, 2, 127, k + 1, a, 1.0, pn))


def test_nested_bound_dominates_unit_scale_bound(hexagon):
    _, stats = hexagon
    pn = snr_to_noise_power(40.0, 1.0)
    full = upper_pe_nested(stats, 2, 5, 1, 1.0, 1.0, pn)
    assert full >= upper_pe_nested_unit(stats, 2, 5, pn)


def test_cdf_accuracy():
    x = np.array([1e-3, 0.5, 1.0, 3.0, 10.0, 40.0])
    assert np.allclose(chi2.sf(x, 2), np.exp(-x / 2), rtol=1e-12, atol=0)
    assert np.allclose(chi2.cdf(x, 2), -np.expm1(-x / 2), rtol=1e-12, atol=0)
    assert ndtr(0.0) == 0.5
    z = np.linspace(-8, 8, 33)
    assert np.allclose(ndtr(z) + ndtr(-z), 1.0, rtol=0, atol=1e-15)
    assert ndtr(-1.0) == pytest.approx(0.15865525393145705, rel=1e-13)

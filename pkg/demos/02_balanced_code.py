"""Balanced numeral codes: integers as signed digits sent over several channel uses."""

# %%
import numpy as np

from aircomp import balanced
from aircomp.bounds import exact_pe_balanced, upper_pe_balanced
from aircomp.channel import ChannelConfig, snr_to_noise_power, transmit

cfg = balanced.BalancedConfig(base=5, digits=2, power=1.0, levels=25)
values = np.array([12, -7, 0, 3])
digits = balanced.to_balanced_digits(cfg, values)
print("digits (least significant first):\n", digits)
print("back to integers:", balanced.from_digits(cfg, digits))

# %%
# Five devices send their values at once. The channel adds the signals, and
# because the code is linear the receiver reads off the sum directly.
rng = np.random.default_rng(1)
z = rng.integers(-12, 13, size=(5, 8))
x = balanced.encode_values(cfg, z)
clean = transmit(ChannelConfig(1.0, 5, noiseless=True), x, rng)
print("true sums   :", z.sum(axis=0))
print("decoded sums:", balanced.decode_sum(cfg, clean))

# %%
# With noise the error event does not depend on the number of devices: the
# sum is decoded wrongly exactly when the rounded noise is not a zero-sum
# digit vector.
for snr in (0.0, 2.0, 6.0, 10.0):
    pn = snr_to_noise_power(snr, 1.0)
    ch = ChannelConfig(pn, 5)
    y = transmit(ch, balanced.encode_values(cfg, np.zeros((5, 200_000), dtype=int)), rng)
    emp = np.mean(balanced.decode_sum(cfg, y) != 0)
    print(f"{snr:5.1f} dB  empirical {emp:.4f}  exact {exact_pe_balanced(cfg, pn):.4f}"
          f"  upper bound {upper_pe_balanced(25, 2, 1.0, pn):.4f}")

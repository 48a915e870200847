"""Nested lattice codes from Construction A and decoding of the modulo sum."""

# %%
import numpy as np

from aircomp import nested
from aircomp.channel import ChannelConfig, transmit
from aircomp.lattice import hexagonal_lattice

shaping, _ = hexagonal_lattice(1.0)
p = nested.smallest_prime_above(3 * 24)  # three devices, 25 quantization levels
code = nested.build_code(shaping, p, rng_seed=0)
print(f"p = {p}, generator = {code.generator}, rate = {code.rate:.3f} bits per channel use")

# %%
# Each device subtracts its own dither before reducing into the shaping cell.
# The receiver adds the dithers back, scales, reduces, and decodes the coset
# of the fine lattice that the sum landed in.
rng = np.random.default_rng(2)
w = rng.integers(0, 25, size=(3, 10))
u = shaping.sample_dither(rng, (3, 10))
x = nested.encode(code, w, u)
print("mean transmit power:", np.mean(x**2))

ch = ChannelConfig.from_snr(35.0, 1.0, 3)
y = transmit(ch, x, rng)
rcfg = nested.ReceiverConfig(3, ch.noise_power, 1.0)
print("true sums   :", w.sum(axis=0))
print("decoded sums:", nested.decode_sum(code, rcfg, y, u))

# %%
# A prime that is too small wraps the sum around and is refused.
try:
    nested.validate_prime(47, 2, 25)
except nested.PrimeTooSmall as exc:
    print("refused:", exc)

# %%
# Computation rates for the MMSE receiver and the unit-scale receiver.
for k in (1, 2, 5):
    print(k, nested.achievable_rate(1.0, 0.1, k), nested.achievable_rate(1.0, 0.1, k, scale=1.0))

"""Federated least-squares training with gradient sums sent over the air."""

# %%
from dataclasses import replace

import numpy as np

from aircomp import feel

cfg = feel.TrainConfig(clients=5, rounds=100, dim=8, lr=0.1)
base = feel.baseline(cfg)
print(f"error-free quantized baseline: final loss {base.losses[-1]:.5f}")

# %%
# At high SNR the coded link is as good as error-free aggregation. At low SNR
# decoding errors corrupt the summed gradients and the model stalls.
for scheme in ("balanced", "nested"):
    for snr in (20.0, 5.0, 0.0):
        res = feel.train(replace(cfg, scheme=scheme, snr_db=snr))
        print(f"{scheme:>8} {snr:5.1f} dB  final loss {res.losses[-1]:.5f}"
              f"  ratio {res.losses[-1] / base.losses[-1]:.2f}")

# %%
res = feel.train(replace(cfg, snr_db=20.0), out="losses.csv")
print("loss every 10 rounds:", np.round(res.losses[::10], 4))
